#include "tanhflow/evolution.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tanhflow/quadrature.hpp"

namespace tanhflow {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
}  // namespace

double l2_norm(const Grid& g, const std::vector<cplx>& f) {
    std::vector<double> sq(f.size());
    for (size_t i = 0; i < f.size(); ++i) sq[i] = std::norm(f[i]);
    return std::sqrt(g.integrate(sq));
}

double h1_norm(const Grid& g, const std::vector<cplx>& f) {
    const int n = g.size();
    std::vector<double> sq(n);
    for (int i = 0; i < n; ++i) {
        cplx d;
        if (i == 0)
            d = (f[1] - f[0]) / g.h();
        else if (i == n - 1)
            d = (f[n - 1] - f[n - 2]) / g.h();
        else
            d = (f[i + 1] - f[i - 1]) / (2.0 * g.h());
        sq[i] = std::norm(f[i]) + std::norm(d);
    }
    return std::sqrt(g.integrate(sq));
}

std::pair<cplx, cplx> a0_b0(const std::vector<cplx>& omega0, const Grid& grid) {
    const int n = grid.size();
    if (static_cast<int>(omega0.size()) != n)
        throw std::invalid_argument("a0_b0: data size does not match grid");
    if (n % 2 == 0 || std::abs(grid.y0() + grid.ymax()) > 1e-9 ||
        std::abs(grid.y((n - 1) / 2)) > 1e-9)
        throw std::invalid_argument(
            "a0_b0: grid must be symmetric about 0 with a node at y = 0");
    const int i0 = (n - 1) / 2;
    const int m = n - i0;
    std::vector<cplx> integrand(m);
    // limit value 2 w'(0) by the 4th-order antisymmetric stencil
    integrand[0] = (8.0 * (omega0[i0 + 1] - omega0[i0 - 1]) -
                    (omega0[i0 + 2] - omega0[i0 - 2])) / (6.0 * grid.h());
    for (int k = 1; k < m; ++k)
        integrand[k] = (omega0[i0 + k] - omega0[i0 - k]) / std::sinh(grid.y(i0 + k));
    Grid half(0.0, grid.h(), m);
    return {half.integrate(integrand), omega0[i0]};
}

InitialData make_initial_data(int alpha, const Grid& grid, const RealFn& fn) {
    InitialData d;
    d.alpha = alpha;
    d.omega0.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) d.omega0[i] = fn(grid.y(i));
    auto ab = a0_b0(d.omega0, grid);
    d.a0 = ab.first;
    d.b0 = ab.second;
    return d;
}

RealFn family_fn(const std::string& name) {
    if (name == "gaussian") return [](double y) { return std::exp(-y * y); };
    if (name == "odd_gaussian")
        return [](double y) { return std::sinh(y) * std::exp(-y * y); };
    if (name == "sech_cubed") {
        return [](double y) {
            double s = 1.0 / std::cosh(y);
            return 2.0 * s * s * s;
        };
    }
    if (name == "bump") {
        return [](double y) {
            double s = y / 3.0;
            if (std::abs(s) >= 1.0) return 0.0;
            return std::exp(-1.0 / (1.0 - s * s) + 1.0);
        };
    }
    throw std::invalid_argument("family_fn: unknown family '" + name + "'");
}

cplx s_of(double t) {
    const double osc = std::abs(t) * 0.5 / kPi;  // oscillations over (-1/2,1/2)
    int np = std::max(16, int(std::ceil(osc * 10.0 / 8.0)));
    if (np % 2) ++np;
    auto f = [&](double c) {
        return std::sin(c * t) * chi0(c) * (1.0 - c * c) * (1.0 - c * c) / c;
    };
    std::vector<double> edges(np + 1);
    for (int i = 0; i <= np; ++i) edges[i] = -0.5 + double(i) / np;
    return -kI * integrate_panels(f, edges, 8);
}

Grid refined_grid(const Grid& g, int refine) {
    if (refine <= 1) return g;
    return Grid(g.y0(), g.h() / refine, (g.size() - 1) * refine + 1);
}

int auto_refine(const KernelTable& table, double t) {
    // keep the phase increment alpha*t*h per refined cell below ~0.25
    double kh = table.alpha() * std::abs(t) * table.ygrid.h();
    return std::max(1, std::min(16, int(std::ceil(kh / 0.25))));
}

namespace {

// y -> sum_j coeff_j * column_j(y) on the refined grid; per-column stencils
// repeat with period `refine`, so the inner loop is six fused multiplies.
void accumulate_columns(const Grid& g, int refine,
                        const std::vector<std::vector<double>>& cols,
                        const std::vector<cplx>& coeff, std::vector<cplx>& out) {
    const int nr = (g.size() - 1) * refine + 1;
    out.assign(nr, cplx(0.0));
    for (size_t j = 0; j < cols.size(); ++j) {
        if (coeff[j] == cplx(0.0) || cols[j].empty()) continue;
        const std::vector<double>& col = cols[j];
        const cplx w = coeff[j];
        if (refine == 1) {
            for (int i = 0; i < g.size(); ++i) out[i] += w * col[i];
            continue;
        }
        Grid rg = refined_grid(g, refine);
        for (int ir = 0; ir < nr; ++ir) {
            Grid::Stencil st = g.stencil(rg.y(ir));
            double v = 0.0;
            for (int k = 0; k < 6; ++k) v += st.w[k] * col[st.base + k];
            out[ir] += w * v;
        }
    }
}

}  // namespace

std::vector<cplx> f1_eval(const KernelTable& table, double t, int y_refine) {
    if (table.alpha() != 1)
        throw std::invalid_argument("f1_eval: needs an alpha = 1 kernel table");
    if (std::abs(t) > table.resolved_alpha_t)
        throw std::invalid_argument("f1_eval: t exceeds the table's resolved range");
    if (y_refine <= 0) y_refine = auto_refine(table, t);
    const Grid& g = table.ygrid;
    Grid rg = refined_grid(g, y_refine);
    std::vector<cplx> coeff(table.c.size(), cplx(0.0));
    for (size_t j = 0; j < table.c.size(); ++j) {
        const double c = table.c[j];
        if (table.chi0v[j] == 0.0 || table.Q[j].empty()) continue;
        const double omc2 = 1.0 - c * c;
        coeff[j] = -table.cw[j] * std::exp(-kI * c * t) * table.chi0v[j] * omc2 * omc2;
    }
    std::vector<cplx> Psi;
    accumulate_columns(g, y_refine, table.Q, coeff, Psi);
    const cplx spi = s_of(t) + kI * kPi;
    std::vector<cplx> out(rg.size());
    for (int i = 0; i < rg.size(); ++i)
        out[i] = (Psi[i] + spi / std::cosh(rg.y(i))) / (2.0 * kPi * kPi);
    return out;
}

std::vector<cplx> eigen_projection(cplx a0, cplx b0, const Grid& grid) {
    const cplx coef = (a0 + kI * kPi * b0) / (2.0 * kPi * kI);
    std::vector<cplx> out(grid.size());
    for (int i = 0; i < grid.size(); ++i) out[i] = coef / std::cosh(grid.y(i));
    return out;
}

ModeField psi_mode(const KernelTable& table, double t, int y_refine) {
    const int alpha = table.alpha();
    if (std::abs(t) * alpha > table.resolved_alpha_t)
        throw std::invalid_argument(
            "psi_mode: alpha*t exceeds the table's resolved range (need at least "
            "10 quadrature points per oscillation)");
    if (y_refine <= 0) y_refine = auto_refine(table, t);
    const Grid& g = table.ygrid;
    Grid rg = refined_grid(g, y_refine);
    const int nr = rg.size();
    ModeField fld;
    fld.alpha = alpha;
    fld.t = t;
    fld.grid = rg;

    std::vector<cplx> coeff(table.c.size(), cplx(0.0));
    if (alpha >= 2) {
        for (size_t j = 0; j < table.c.size(); ++j)
            coeff[j] = table.cw[j] *
                       std::exp(-kI * double(alpha) * table.c[j] * t) * table.mu[j];
        accumulate_columns(g, y_refine, table.gamma, coeff, fld.psi);
        return fld;
    }

    // alpha = 1: five-part assembly around the embedding eigenvalue
    std::vector<cplx> reg_coeff(table.c.size(), cplx(0.0)),
        q_coeff(table.c.size(), cplx(0.0));
    for (size_t j = 0; j < table.c.size(); ++j) {
        const double c = table.c[j];
        const cplx phase = std::exp(-kI * c * t);
        cplx w(0.0);
        if (table.chi1v[j] > 0.0)
            w += table.cw[j] * phase * table.chi1v[j] * table.mu[j];
        if (table.chi0v[j] > 0.0) {
            const double omc2 = 1.0 - c * c;
            const double den = table.A_t[j] * table.A_t[j] + 4.0 * kPi * kPi;
            w += -table.cw[j] * phase * table.chi0v[j] * omc2 * omc2 *
                 table.Lam1t[j] / den;
            w += table.cw[j] * phase * table.chi0v[j] * omc2 * omc2 * c *
                 table.A_tt[j] * table.A_tt[j] / den * table.a0 / (2.0 * kPi * kPi);
            q_coeff[j] = -table.cw[j] * phase * table.chi0v[j] * omc2 * omc2;
        }
        reg_coeff[j] = w;
    }
    std::vector<cplx> Psi;
    accumulate_columns(g, y_refine, table.gamma, reg_coeff, fld.regular);
    accumulate_columns(g, y_refine, table.Q, q_coeff, Psi);
    const cplx spi = s_of(t) + kI * kPi;
    fld.projection = eigen_projection(table.a0, table.b0, rg);
    fld.rank_one.resize(nr);
    fld.psi.resize(nr);
    for (int i = 0; i < nr; ++i) {
        cplx f1 = (Psi[i] + spi / std::cosh(rg.y(i))) / (2.0 * kPi * kPi);
        fld.rank_one[i] = table.a0 * f1;
        fld.psi[i] = fld.regular[i] + fld.rank_one[i] + fld.projection[i];
    }
    return fld;
}

std::pair<double, double> velocity_norms(const std::vector<ModeField>& fields) {
    double v2 = 0.0, v2sq = 0.0;
    for (size_t k = 0; k < fields.size(); ++k) {
        if (k > 0) {
            const Grid& a = fields[k].grid;
            const Grid& b = fields[0].grid;
            if (a.size() != b.size() || std::abs(a.y0() - b.y0()) > 1e-12 ||
                std::abs(a.h() - b.h()) > 1e-15 ||
                std::abs(fields[k].t - fields[0].t) > 1e-12)
                throw std::invalid_argument("velocity_norms: mismatched grids or times");
        }
        const ModeField& f = fields[k];
        double l2 = l2_norm(f.grid, f.psi);
        double h1 = h1_norm(f.grid, f.psi);
        double dpsi_sq = h1 * h1 - l2 * l2;  // || d_y psi ||^2
        v2 += 2.0 * (double(f.alpha) * f.alpha * l2 * l2 + dpsi_sq);
        v2sq += 2.0 * double(f.alpha) * f.alpha * l2 * l2;
    }
    return {v2, v2sq};
}

}  // namespace tanhflow
