#include "tanhflow/wronskian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tanhflow/field_ratios.hpp"
#include "tanhflow/parallel.hpp"
#include "tanhflow/quadrature.hpp"

namespace tanhflow {


cplx w1(const Phi1Field& field) {
    const Grid& g = field.grid;
    const cplx c = field.point.c;
    FieldRatios rr(field);
    std::vector<cplx> integrand(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const FlowSample fs = eval_flow(g.y(i));
        cplx p = field.phi1[i];
        cplx t1 = (fs.u + c) * (fs.u + c) / (p * p);
        cplx t2 = (1.0 + fs.u * fs.u - 2.0 * c * c) * fs.du * rr.rm(i);
        integrand[i] = t1 + t2;
    }
    if (field.point.real_c()) return g.integrate(integrand);

    // Im c != 0: the removable ratio has an |Im c|-width feature at y_c that
    // the grid rule cannot see; integrate a window around y_c by refined
    // panels with the ratio reconstructed from the cumulative fields.
    const double h = g.h();
    const double y_c = field.point.y_c;
    const double eps = std::abs(field.point.c.imag());
    // the feature width in y is eps / u'(y_c); the grid rule resumes only
    // where the feature tail is below the rule's resolution
    const double up_yc = 1.0 - field.point.c.real() * field.point.c.real();
    const double band = 4.0 * h + 12.0 * eps / up_yc;
    const UMinusC D(field.point);
    const Phi1Eval ev(field);
    const double a2 = double(field.point.alpha) * field.point.alpha;
    cplx acc(0.0);
    double wlo = y_c, whi = y_c;
    for (int i = 0; i + 1 < g.size(); ++i) {
        const double a = g.y(i), b = g.y(i + 1);
        if (b > y_c - band && a < y_c + band) {
            wlo = std::min(wlo, a);
            whi = std::max(whi, b);
            continue;
        }
        acc += g.cell_integral(integrand, i);
    }
    auto fn = [&](double y) {
        const FlowSample fs = eval_flow(y);
        cplx tv = ev.tphi_at(y);
        cplx p = 1.0 + a2 * tv;
        cplx q = -a2 * tv * (p + 1.0) / (p * p);  // 1/phi1^2 - 1
        return (fs.u + c) * (fs.u + c) / (p * p) +
               (1.0 + fs.u * fs.u - 2.0 * c * c) * fs.du * q / D.sq(y);
    };
    std::vector<double> edges = refined_edges(wlo, whi, y_c, whi - wlo,
                                              std::max(eps / 8.0, h / 4096.0),
                                              whi - wlo);
    return acc + integrate_panels(fn, edges, 16);
}

cplx wronskian_direct(const Phi1Field& field) {
    if (field.point.real_c())
        throw std::invalid_argument("wronskian_direct: Im c = 0; use the W1 route");
    const Grid& g = field.grid;
    const UMinusC D(field.point);
    const double eps = std::abs(field.point.c.imag());
    const Phi1Eval phi1(field);
    auto f = [&](double y) {
        cplx p1 = phi1(y);
        cplx d = D(y);
        return 1.0 / (d * d * p1 * p1);
    };
    const double w0 = std::min(1.0, 2.0 / field.point.alpha);
    std::vector<double> edges =
        refined_edges(g.ymin(), g.ymax(), field.point.y_c, w0,
                      std::max(eps / 8.0, 1e-9), std::max(0.5, 1.0 / field.point.alpha));
    return integrate_panels(f, edges, 16);
}

cplx wronskian_via_w1(const Phi1Field& field, Side side) {
    const cplx c = field.point.c;
    const cplx W1v = w1(field);
    const cplx pref = 1.0 / ((1.0 - c * c) * (1.0 - c * c));
    if (!field.point.real_c()) {
        return pref * (W1v + 2.0 * c * std::log((c - 1.0) / (c + 1.0)));
    }
    if (side == Side::none)
        throw std::invalid_argument(
            "wronskian_via_w1: c on the branch cut [-1,1]; pass Side::plus or Side::minus");
    const double cr = c.real();
    const double logterm = std::log((1.0 - cr) / (1.0 + cr));
    const double sgn = (side == Side::plus) ? 1.0 : -1.0;
    // ln((c-1)/(c+1)) -> ln((1-c)/(1+c)) +- i pi as eps -> 0+-
    return pref * (W1v + 2.0 * c * (logterm + sgn * cplx(0.0, std::numbers::pi)));
}

double a_of(const Phi1Field& field) {
    if (!field.point.real_c())
        throw std::invalid_argument("a_of: c must be real");
    const double c = field.point.c.real();
    if (std::abs(c) >= 1.0 - 1e-6)
        throw std::invalid_argument("a_of: |c| too close to 1 for the configured grid");
    const Grid& g = field.grid;
    FieldRatios rr(field);
    std::vector<double> integrand(g.size());
    for (int i = 0; i < g.size(); ++i) {
        const FlowSample fs = eval_flow(g.y(i));
        double p = field.phi1[i].real();
        double t1 = (fs.u + c) * (fs.u + c) / (p * p);
        double t2 = 2.0 * c * fs.du * rr.rm1(i).real();
        double t3 = (1.0 - c * c) * fs.du * rr.rm(i).real();
        double t4 = fs.du * rr.q(i).real();
        integrand[i] = t1 + t2 + t3 + t4;
    }
    return g.integrate(integrand) + 2.0 * c * std::log((1.0 - c) / (1.0 + c));
}

AEvaluator::AEvaluator(int alpha, SolveParams params)
    : alpha_(alpha), params_(params) {}

double AEvaluator::A_direct(double c) const {
    SpectralPoint p = make_spectral_point(cplx(c, 0.0), alpha_, params_.eps0, params_.C_o);
    Grid g = default_grid(p, params_.alpha_h);
    Phi1Field f = solve_phi1(p, g, params_.tol, params_.max_iter);
    return a_of(f);
}

void AEvaluator::ensure_micro() const {
    std::lock_guard<std::mutex> lk(mtx_);
    if (micro_built_) return;
    const int n = 2 * int(std::round(kMicroHalf / kMicroStep)) + 1;
    micro_.assign(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        double c = -kMicroHalf + double(i) * kMicroStep;
        micro_[i] = A_direct(c);
    }, params_.threads);
    micro_built_ = true;
}

double AEvaluator::A(double c) const {
    if (std::abs(c) >= params_.c_max)
        throw std::invalid_argument("AEvaluator::A: |c| beyond c_max");
    if (std::abs(c) <= kMicroHalf - 1e-12) {
        ensure_micro();
        Grid mg(-kMicroHalf, kMicroStep, int(micro_.size()));
        return mg.interp(micro_, c);
    }
    long long key = llround(c * 1e12);
    {
        std::lock_guard<std::mutex> lk(mtx_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    double v = A_direct(c);
    std::lock_guard<std::mutex> lk(mtx_);
    memo_.emplace(key, v);
    return v;
}

double AEvaluator::dA(double c) const {
    const double h = params_.fd_step;
    return (-A(c + 2 * h) + 8 * A(c + h) - 8 * A(c - h) + A(c - 2 * h)) / (12 * h);
}

double AEvaluator::d2A(double c) const {
    const double h = params_.fd_step;
    return (-A(c + 2 * h) + 16 * A(c + h) - 30 * A(c) + 16 * A(c - h) - A(c - 2 * h)) /
           (12 * h * h);
}

double AEvaluator::A_tilde(double c) const {
    if (c == 0.0) return 0.0;
    if (std::abs(c) >= params_.c_switch) return A(c) / c;
    // A~(c) = int_0^1 dA(s c) ds
    const GaussRule& r = gauss_rule(8);
    double acc = 0.0;
    for (size_t k = 0; k < r.x.size(); ++k) {
        double s = 0.5 * (1.0 + r.x[k]);
        acc += 0.5 * r.w[k] * dA(s * c);
    }
    return acc;
}

double AEvaluator::A_ttilde(double c) const {
    if (std::abs(c) >= params_.c_switch) return A(c) / (c * c);
    // A~~(c) = int_0^1 int_0^1 s d2A(s t c) ds dt
    const GaussRule& r = gauss_rule(8);
    double acc = 0.0;
    for (size_t a = 0; a < r.x.size(); ++a) {
        double s = 0.5 * (1.0 + r.x[a]);
        for (size_t b = 0; b < r.x.size(); ++b) {
            double t = 0.5 * (1.0 + r.x[b]);
            acc += 0.25 * r.w[a] * r.w[b] * s * d2A(s * t * c);
        }
    }
    return acc;
}

WronskianLimitDiagnostics wronskian_limit_check(const std::vector<double>& eps_list,
                                                const SolveParams& params) {
    WronskianLimitDiagnostics d;
    d.eps = eps_list;
    d.ratio.resize(eps_list.size());
    parallel_for(eps_list.size(), [&](std::size_t k) {
        const double eps = eps_list[k];
        SpectralPoint p = make_spectral_point(cplx(0.0, eps), 1, params.eps0, params.C_o);
        Grid g = default_grid(p, params.alpha_h);
        Phi1Field f = solve_phi1(p, g, params.tol, params.max_iter);
        d.ratio[k] = wronskian_direct(f) / cplx(0.0, eps);
    }, params.threads);
    const cplx target(0.0, 2.0 * std::numbers::pi);
    d.extrapolated = richardson_limit(d.eps, d.ratio);
    d.rel_error_raw = std::abs(d.ratio.back() - target) / std::abs(target);
    d.rel_error_extrapolated = std::abs(d.extrapolated - target) / std::abs(target);
    return d;
}

}  // namespace tanhflow
