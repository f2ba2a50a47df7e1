#include "tanhflow/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "tanhflow/evolution.hpp"
#include "tanhflow/quadrature.hpp"

namespace tanhflow {

GreensOp::GreensOp(const Grid& grid, int alpha) : grid_(grid), alpha_(alpha) {
    if (alpha < 1) throw std::invalid_argument("GreensOp: alpha >= 1 required");
    const int n = grid.size();
    const double h = grid.h();
    decay_ = std::exp(-alpha * h);
    // Collapse (GL-6 nodes) x (quintic interpolation) into 6 taps per cell:
    //   up:   int_{y_i}^{y_i+h} e^{-alpha (y_i + h - z)} omega(z) dz
    //   down: int_{y_i}^{y_i+h} e^{-alpha (z - y_i)} omega(z) dz
    const GaussRule& r = gauss_rule(6);
    up_taps_.resize(n - 1);
    down_taps_.resize(n - 1);
    base_.resize(n - 1);
    for (int i = 0; i + 1 < n; ++i) {
        up_taps_[i].fill(0.0);
        down_taps_[i].fill(0.0);
        int b = 0;
        for (int k = 0; k < 6; ++k) {
            double xi = 0.5 * h * (1.0 + r.x[k]);  // offset within the cell
            double w = 0.5 * h * r.w[k];
            Grid::Stencil st = grid.stencil(grid.y(i) + xi);
            b = st.base;
            for (int m = 0; m < 6; ++m) {
                up_taps_[i][m] += w * std::exp(-alpha * (h - xi)) * st.w[m];
                down_taps_[i][m] += w * std::exp(-alpha * xi) * st.w[m];
            }
        }
        base_[i] = b;
    }
}

std::vector<cplx> GreensOp::apply(const std::vector<cplx>& omega) const {
    const int n = grid_.size();
    if (static_cast<int>(omega.size()) != n)
        throw std::invalid_argument("GreensOp::apply: size mismatch");
    std::vector<cplx> up(n, cplx(0.0)), down(n, cplx(0.0)), psi(n);
    for (int i = 0; i + 1 < n; ++i) {
        cplx seg(0.0);
        const auto& taps = up_taps_[i];
        for (int m = 0; m < 6; ++m) seg += taps[m] * omega[base_[i] + m];
        up[i + 1] = decay_ * up[i] + seg;
    }
    for (int i = n - 2; i >= 0; --i) {
        cplx seg(0.0);
        const auto& taps = down_taps_[i];
        for (int m = 0; m < 6; ++m) seg += taps[m] * omega[base_[i] + m];
        down[i] = decay_ * down[i + 1] + seg;
    }
    const double inv2a = 0.5 / alpha_;
    for (int i = 0; i < n; ++i) psi[i] = inv2a * (up[i] + down[i]);
    return psi;
}

std::vector<cplx> greens_inverse(const std::vector<cplx>& omega, int alpha,
                                 const Grid& grid) {
    return GreensOp(grid, alpha).apply(omega);
}

namespace {

struct RhsOp {
    GreensOp greens;
    std::vector<double> u, d2u;
    int alpha;

    RhsOp(const Grid& g, int a) : greens(g, a), alpha(a) {
        u.resize(g.size());
        d2u.resize(g.size());
        for (int i = 0; i < g.size(); ++i) {
            FlowSample fs = eval_flow(g.y(i));
            u[i] = fs.u;
            d2u[i] = fs.d2u;
        }
    }

    void operator()(const std::vector<cplx>& omega, std::vector<cplx>& out) const {
        std::vector<cplx> psi = greens.apply(omega);
        const cplx ia(0.0, double(alpha));
        out.resize(omega.size());
        for (size_t i = 0; i < omega.size(); ++i)
            out[i] = -ia * (u[i] * omega[i] + d2u[i] * psi[i]);
    }
};

}  // namespace

std::vector<cplx> rhs(const VorticityState& state) {
    RhsOp op(state.grid, state.alpha);
    std::vector<cplx> out;
    op(state.omega, out);
    return out;
}

Trajectory evolve(const std::vector<cplx>& omega0, int alpha, const Grid& grid,
                  std::vector<double> out_times, double dt) {
    if (dt <= 0.0) dt = 0.5 / alpha;
    std::sort(out_times.begin(), out_times.end());
    if (out_times.empty() || out_times.front() > 1e-14)
        out_times.insert(out_times.begin(), 0.0);

    RhsOp op(grid, alpha);
    const int n = grid.size();
    std::vector<cplx> w = omega0, k1, k2, k3, k4, tmp(n);
    double norm0 = l2_norm(grid, omega0);

    Trajectory traj;
    auto snapshot = [&](double t) {
        VorticityState s;
        s.alpha = alpha;
        s.t = t;
        s.grid = grid;
        s.omega = w;
        s.psi = op.greens.apply(w);
        traj.snapshots.push_back(std::move(s));
    };
    auto edge_mass = [&]() {
        double mx = 0.0, edge = 0.0;
        for (int i = 0; i < n; ++i) mx = std::max(mx, std::abs(w[i]));
        for (int i = 0; i < 5; ++i) {
            edge = std::max(edge, std::abs(w[i]));
            edge = std::max(edge, std::abs(w[n - 1 - i]));
        }
        return (mx > 0.0) ? edge / mx : 0.0;
    };

    double t = 0.0;
    traj.boundary_mass = edge_mass();
    for (double target : out_times) {
        if (target <= t + 1e-14) {
            if (std::abs(target - t) <= 1e-14) snapshot(t);
            continue;
        }
        int steps = std::max(1, int(std::ceil((target - t) / dt - 1e-12)));
        double hstep = (target - t) / steps;
        for (int s = 0; s < steps; ++s) {
            op(w, k1);
            for (int i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * hstep * k1[i];
            op(tmp, k2);
            for (int i = 0; i < n; ++i) tmp[i] = w[i] + 0.5 * hstep * k2[i];
            op(tmp, k3);
            for (int i = 0; i < n; ++i) tmp[i] = w[i] + hstep * k3[i];
            op(tmp, k4);
            for (int i = 0; i < n; ++i)
                w[i] += hstep / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t = target;
        if (norm0 > 0.0 && l2_norm(grid, w) > 10.0 * norm0)
            throw std::runtime_error(
                "evolve: norm grew beyond 10x the initial value (instability)");
        traj.boundary_mass = std::max(traj.boundary_mass, edge_mass());
        snapshot(t);
    }
    return traj;
}

std::vector<std::pair<cplx, cplx>> conserved_ab(const Trajectory& traj) {
    std::vector<std::pair<cplx, cplx>> out;
    out.reserve(traj.snapshots.size());
    for (const VorticityState& s : traj.snapshots)
        out.push_back(a0_b0(s.omega, s.grid));
    return out;
}

}  // namespace tanhflow
