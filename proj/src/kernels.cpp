#include "tanhflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tanhflow/field_ratios.hpp"
#include "tanhflow/parallel.hpp"
#include "tanhflow/quadrature.hpp"

namespace tanhflow {

namespace {

constexpr double kPi = std::numbers::pi;

// Cumulative integral of a callback from y_c, on grid nodes and at arbitrary
// points, with 6-point Gauss increments per cell.
class VolterraFn {
  public:
    VolterraFn(const Grid& g, double y_c, std::function<cplx(double)> fn)
        : g_(g), fn_(std::move(fn)) {
        const int n = g.size();
        F_.assign(n, cplx(0.0));
        jc_ = g.cell(y_c);
        auto seg = [&](double a, double b) { return integrate_gl(fn_, a, b, 6); };
        F_[jc_] = -seg(g.y(jc_), y_c);
        F_[jc_ + 1] = seg(y_c, g.y(jc_ + 1));
        for (int i = jc_ + 1; i + 1 < n; ++i) F_[i + 1] = F_[i] + seg(g.y(i), g.y(i + 1));
        for (int i = jc_; i > 0; --i) F_[i - 1] = F_[i] - seg(g.y(i - 1), g.y(i));
    }
    cplx at(double x) const {
        int i = g_.cell(x);
        return F_[i] + integrate_gl(fn_, g_.y(i), x, 6);
    }
    const std::vector<cplx>& nodes() const { return F_; }

  private:
    const Grid& g_;
    std::function<cplx(double)> fn_;
    std::vector<cplx> F_;
    int jc_;
};

// Cumulative from the left grid end with panels refined toward y_c inside
// cells near the critical point (feature scale eps = |Im c|).
std::vector<cplx> cumulative_refined(const Grid& g, double y_c, double eps,
                                     const std::function<cplx(double)>& fn) {
    const int n = g.size();
    std::vector<cplx> out(n, cplx(0.0));
    const double h = g.h();
    const double w0 = 4.0 * h;
    const double min_w = std::max(eps / 8.0, h / 1024.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double a = g.y(i), b = g.y(i + 1);
        cplx seg;
        if (std::min(std::abs(a - y_c), std::abs(b - y_c)) < w0 && min_w < (b - a)) {
            std::vector<double> edges = refined_edges(a, b, y_c, b - a, min_w, b - a);
            seg = integrate_panels(fn, edges, 8);
        } else {
            seg = integrate_gl(fn, a, b, 6);
        }
        out[i + 1] = out[i] + seg;
    }
    return out;
}

void check_f(const Grid& g, const std::vector<cplx>& f, const char* who) {
    if (static_cast<int>(f.size()) != g.size())
        throw std::invalid_argument(std::string(who) + ": f size does not match grid");
    for (const cplx& v : f)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument(std::string(who) + ": non-finite data sample");
}

struct TSplit {
    cplx I1, I2, I3;
};

// I1 + I2 + I3 split of T(f)(c), valid for real and complex c in O~.  The
// subtraction terms use c_r = Re c, as in the continuity analysis.
TSplit t_split(const Phi1Field& field, const std::vector<cplx>& f) {
    const Grid& g = field.grid;
    const SpectralPoint& pt = field.point;
    const double y_c = pt.y_c;
    const double cr = pt.c.real();
    const double omc2 = 1.0 - cr * cr;
    const UMinusC D(pt);
    const double eps = std::abs(pt.c.imag());

    const Phi1Eval phi1_acc(field);
    VolterraFn F1(g, y_c, [&](double w) {
        return g.interp(field.phi1, w) * g.interp(f, w);
    });
    VolterraFn F0(g, y_c, [&](double w) { return g.interp(f, w); });
    const cplx fyc = g.interp(f, y_c);

    auto i1 = [&](double z) {
        cplx p1 = phi1_acc(z);
        cplx num = F1.at(z) / (p1 * p1) - F0.at(z) * (eval_flow(z).du / omc2);
        return num / D.sq(z);
    };
    auto i2 = [&](double z) {
        cplx gz = F0.at(z) - D.re(z) * fyc / omc2;
        return eval_flow(z).du * gz / D.sq(z) / omc2;
    };

    const double w0 = std::min(1.0, 2.0 / pt.alpha);
    const double min_w = (eps > 0.0) ? std::max(eps / 8.0, 1e-7) : 1e-4;
    std::vector<double> edges = refined_edges(g.ymin(), g.ymax(), y_c, w0, min_w,
                                              std::max(0.5, 1.0 / pt.alpha));
    TSplit s;
    s.I1 = integrate_panels(i1, edges, 12);
    s.I2 = integrate_panels(i2, edges, 12);
    if (pt.real_c()) {
        s.I3 = fyc * std::log((1.0 - cr) / (1.0 + cr)) / (omc2 * omc2);
    } else {
        const cplx c = pt.c;
        s.I3 = fyc / (omc2 * omc2) *
               (std::log((c - 1.0) / (c + 1.0)) -
                cplx(0.0, 2.0 * pt.c.imag()) / (1.0 - c * c));
    }
    return s;
}

}  // namespace

double chi0(double c) {
    const double a = std::abs(c);
    if (a <= 0.25) return 1.0;
    if (a >= 0.5) return 0.0;
    const double s = (a - 0.25) * 4.0;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double chi1(double c) { return 1.0 - chi0(c); }

TBoundary calT(const Phi1Field& field, const std::vector<cplx>& f_grid) {
    if (!field.point.real_c())
        throw std::invalid_argument("calT: c must be real (use calT_complex)");
    check_f(field.grid, f_grid, "calT");
    const double cr = field.point.c.real();
    const double omc2 = 1.0 - cr * cr;
    TSplit s = t_split(field, f_grid);
    const cplx fyc = field.grid.interp(f_grid, field.point.y_c);
    TBoundary out;
    out.pv = s.I1 + s.I2 + s.I3;
    const cplx jump = cplx(0.0, kPi) * fyc / (omc2 * omc2);
    out.plus = out.pv + jump;
    out.minus = out.pv - jump;
    return out;
}

cplx calT_complex(const Phi1Field& field, const std::vector<cplx>& f_grid) {
    if (field.point.real_c())
        throw std::invalid_argument("calT_complex: Im c = 0; use calT");
    check_f(field.grid, f_grid, "calT_complex");
    TSplit s = t_split(field, f_grid);
    return s.I1 + s.I2 + s.I3;
}

// ---------------------------------------------------------------------------
// TEvaluator

TEvaluator::TEvaluator(int alpha, RealFn data, SolveParams params)
    : alpha_(alpha), data_(std::move(data)), params_(params) {}

cplx TEvaluator::T_direct(double c) const {
    SpectralPoint p = make_spectral_point(cplx(c, 0.0), alpha_, params_.eps0, params_.C_o);
    Grid g = default_grid(p, params_.alpha_h);
    Phi1Field f = solve_phi1(p, g, params_.tol, params_.max_iter);
    std::vector<cplx> fg(g.size());
    for (int i = 0; i < g.size(); ++i) fg[i] = data_(g.y(i));
    return calT(f, fg).pv;
}

void TEvaluator::ensure_micro() const {
    std::lock_guard<std::mutex> lk(mtx_);
    if (micro_built_) return;
    const int n = 2 * int(std::round(kMicroHalf / kMicroStep)) + 1;
    micro_.assign(n, cplx(0.0));
    parallel_for(n, [&](std::size_t i) {
        micro_[i] = T_direct(-kMicroHalf + double(i) * kMicroStep);
    }, params_.threads);
    micro_built_ = true;
}

cplx TEvaluator::T(double c) const {
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
    cplx v = T_direct(c);
    std::lock_guard<std::mutex> lk(mtx_);
    memo_.emplace(key, v);
    return v;
}

cplx TEvaluator::dT(double c) const {
    const double h = params_.fd_step;
    return (-T(c + 2 * h) + 8.0 * T(c + h) - 8.0 * T(c - h) + T(c - 2 * h)) / (12.0 * h);
}

cplx TEvaluator::T_tilde(double c) const {
    if (std::abs(c) >= params_.c_switch) return (T(c) - T(0.0)) / c;
    const GaussRule& r = gauss_rule(8);
    cplx acc(0.0);
    for (size_t k = 0; k < r.x.size(); ++k) {
        double s = 0.5 * (1.0 + r.x[k]);
        acc += 0.5 * r.w[k] * dT(s * c);
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Gamma

namespace {

// Antiderivative of the pole part of (1-c^2)^2 / phi^2:
//   P(y) = u + 2c ln|u - c| - (1-c^2)/(u - c),
// with u - c from the sinh form.
struct GammaParts {
    const Phi1Field& f;
    UMinusC D;
    double c, omc2, inv4;
    std::vector<double> R;  // cumulative of the regular integrand from ymin

    explicit GammaParts(const Phi1Field& field)
        : f(field), D(field.point), c(field.point.c.real()) {
        omc2 = 1.0 - c * c;
        inv4 = 1.0 / (omc2 * omc2);
        FieldRatios rr(field);
        const Grid& g = field.grid;
        std::vector<double> reg(g.size());
        for (int i = 0; i < g.size(); ++i) {
            const FlowSample fs = eval_flow(g.y(i));
            double p = field.phi1[i].real();
            reg[i] = (fs.u + c) * (fs.u + c) / (p * p) +
                     (1.0 + fs.u * fs.u - 2.0 * c * c) * fs.du * rr.rm(i).real();
        }
        R = g.cumulative(reg);
    }

    double P(double y) const {
        const double d = D.re(y);
        return std::tanh(y) + 2.0 * c * std::log(std::abs(d)) - omc2 / d;
    }
    double P_minus_inf() const { return -c + 2.0 * c * std::log(1.0 + c); }
    double P_plus_inf() const { return -c + 2.0 * c * std::log(1.0 - c); }

    double value(double y, double Ry, double phi1y) const {
        const double y_c = f.point.y_c;
        if (std::abs(y - y_c) < 1e-11) return -1.0 / omc2;
        const double phi = D.re(y) * phi1y;
        if (y < y_c) return phi * inv4 * (Ry + P(y) - P_minus_inf());
        return phi * inv4 * ((Ry - R.back()) + P(y) - P_plus_inf());
    }
};

}  // namespace

std::vector<double> gamma_column(const Phi1Field& field) {
    if (!field.point.real_c())
        throw std::invalid_argument("gamma_column: c must be real");
    GammaParts gp(field);
    const Grid& g = field.grid;
    const int n = g.size();
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = gp.value(g.y(i), gp.R[i], field.phi1[i].real());

    // Beyond alpha|y - y_c| ~ 12 the regularized bracket is a difference of
    // near-equal quantities multiplied by the exponentially large phi, so the
    // value is rebuilt from the decaying tail integral, marched outward from
    // a crossover node seeded with the regularized value.
    const double alpha = field.point.alpha;
    const double y_c = field.point.y_c;
    const UMinusC D(field.point);
    auto inv_phi2 = [&](double z) {
        double p1 = g.interp(field.phi1, z).real();
        double d = D.re(z);
        return 1.0 / (d * d * p1 * p1);
    };
    auto phi_at = [&](int i) { return D.re(g.y(i)) * field.phi1[i].real(); };
    const double cross = 12.0 / alpha;
    // right tail: Gamma(y) = -phi(y) * int_y^{inf} phi^{-2}, accumulated
    // inward from the far end (positive decaying terms, no cancellation;
    // the mass beyond the grid is negligible relative to every node value)
    {
        int js = g.cell(y_c + cross) + 1;
        if (js < n - 1) {
            double tail = 0.0;
            for (int i = n - 2; i >= js; --i) {
                tail += integrate_gl(inv_phi2, g.y(i), g.y(i + 1), 6);
                out[i] = -phi_at(i) * tail;
            }
            out[n - 1] = 0.0;
        }
    }
    // left tail: Gamma(y) = phi(y) * int_{-inf}^{y} phi^{-2}
    {
        int js = g.cell(y_c - cross);
        if (js > 0) {
            double tail = 0.0;
            for (int i = 1; i <= js; ++i) {
                tail += integrate_gl(inv_phi2, g.y(i - 1), g.y(i), 6);
                out[i] = phi_at(i) * tail;
            }
            out[0] = 0.0;
        }
    }
    return out;
}

double gamma_fn(const Phi1Field& field, double y) {
    if (!field.point.real_c())
        throw std::invalid_argument("gamma_fn: c must be real");
    if (!field.grid.inside(y))
        throw std::invalid_argument("gamma_fn: y outside grid");
    if (std::abs(y - field.point.y_c) * field.point.alpha < 11.0) {
        GammaParts gp(field);
        double Ry = field.grid.interp(gp.R, y);
        double p1 = field.grid.interp(field.phi1, y).real();
        return gp.value(y, Ry, p1);
    }
    std::vector<double> col = gamma_column(field);
    return field.grid.interp(col, y);
}

// ---------------------------------------------------------------------------
// mu and the dual functionals

cplx mu_of(double c, int alpha, cplx T_pv, double A, cplx f_at_yc) {
    const double omc2 = 1.0 - c * c;
    const double den = A * A + 4.0 * kPi * kPi * c * c;
    if (alpha == 1 && den < 1e-12)
        throw SingularBranch("mu: embedding-eigenvalue branch at alpha=1, c->0");
    return -(2.0 * c * omc2 * omc2 * T_pv - A * f_at_yc) / den;
}

cplx lambda1(double c, double A, cplx T_pv, cplx f_at_yc) {
    const double omc2 = 1.0 - c * c;
    return 2.0 * c * T_pv - A * f_at_yc / (omc2 * omc2);
}

cplx lambda2(double c, double A, cplx T_uppg, cplx g_at_yc) {
    return T_uppg + A * g_at_yc / (1.0 - c * c);
}

cplx lambda1_tilde(double c, double A_tt, cplx T_tilde, cplx f_at_yc) {
    const double omc2 = 1.0 - c * c;
    return 2.0 * T_tilde - A_tt * f_at_yc / (omc2 * omc2);
}

cplx lambda2_tilde(double c, double A_t, cplx T_tilde_uppg, cplx g_at_yc) {
    return T_tilde_uppg + A_t * g_at_yc / (1.0 - c * c);
}

// ---------------------------------------------------------------------------
// KernelEvaluator

KernelEvaluator::KernelEvaluator(int alpha, RealFn f, RealFn g, SolveParams params)
    : alpha_(alpha),
      f_(std::move(f)),
      g_(std::move(g)),
      params_(params),
      a_(alpha, params),
      tf_(alpha, f_, params),
      tg_(alpha, [gg = g_](double y) { return eval_flow(y).d2u * gg(y); }, params),
      g_raw_(g_) {}

cplx KernelEvaluator::operator()(double c, KernelVariant variant) const {
    const double omc2 = 1.0 - c * c;
    const double y_c = critical_point(c);
    switch (variant) {
        case KernelVariant::full:
        case KernelVariant::K1: {
            const double cut = (variant == KernelVariant::K1) ? chi1(c) : 1.0;
            if (cut == 0.0) return 0.0;
            double A = a_.A(c);
            cplx l1 = lambda1(c, A, tf_.T(c), f_(y_c));
            cplx l2 = lambda2(c, A, tg_.T(c), g_raw_(y_c));
            return cut * omc2 * omc2 * l1 * l2 / (A * A + 4.0 * kPi * kPi * c * c);
        }
        case KernelVariant::K0: {
            const double cut = chi0(c);
            if (cut == 0.0) return 0.0;
            double A = a_.A(c);
            double At = a_.A_tilde(c), Att = a_.A_ttilde(c);
            cplx l1t = lambda1_tilde(c, Att, tf_.T_tilde(c), f_(y_c));
            cplx l2 = lambda2(c, A, tg_.T(c), g_raw_(y_c));
            return cut * omc2 * omc2 * l1t * l2 / (At * At + 4.0 * kPi * kPi);
        }
        case KernelVariant::K0_tilde: {
            const double cut = chi0(c);
            if (cut == 0.0) return 0.0;
            double A = a_.A(c);
            double At = a_.A_tilde(c), Att = a_.A_ttilde(c);
            cplx l2 = lambda2(c, A, tg_.T(c), g_raw_(y_c));
            return cut * omc2 * omc2 * c * Att * Att * l2 / (At * At + 4.0 * kPi * kPi);
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Inhomogeneous solution and LAP assemblies

InhomogeneousSolution solve_inhomogeneous(const Phi1Field& field,
                                          const std::vector<cplx>& f_grid) {
    if (field.point.real_c())
        throw std::invalid_argument("solve_inhomogeneous: Im c must be nonzero");
    check_f(field.grid, f_grid, "solve_inhomogeneous");
    const Grid& g = field.grid;
    const SpectralPoint& pt = field.point;
    const UMinusC D(pt);
    const double eps = std::abs(pt.c.imag());

    const cplx W = wronskian_direct(field);
    if (std::abs(W) < 1e-13)
        throw std::runtime_error("solve_inhomogeneous: |W| below threshold");
    const cplx Tf = calT_complex(field, f_grid);
    const cplx mu_w = -Tf / W;

    const Phi1Eval phi1_acc(field);
    VolterraFn F1(g, pt.y_c, [&](double w) {
        return g.interp(field.phi1, w) * g.interp(f_grid, w);
    });
    auto inv_phi2 = [&](double z) {
        cplx p1 = phi1_acc(z);
        return 1.0 / (D.sq(z) * p1 * p1);
    };
    auto qf = [&](double z) { return F1.at(z) * inv_phi2(z); };

    std::vector<cplx> CF = cumulative_refined(g, pt.y_c, eps, qf);
    std::vector<cplx> CW = cumulative_refined(g, pt.y_c, eps, inv_phi2);
    // right-branch integrals from +inf as their own backward march, so the
    // decaying tail never comes from a difference of near-equal totals
    const int n = g.size();
    std::vector<cplx> TF(n, cplx(0.0)), TW(n, cplx(0.0));
    for (int i = n - 2; i >= 0; --i) {
        TF[i] = TF[i + 1] - (CF[i + 1] - CF[i]);
        TW[i] = TW[i + 1] - (CW[i + 1] - CW[i]);
    }

    InhomogeneousSolution sol;
    sol.point = pt;
    sol.grid = g;
    sol.Phi.resize(n);
    sol.mu_coeff = mu_w;
    std::vector<cplx> right(n);
    for (int i = 0; i < n; ++i) {
        cplx phi = D(g.y(i)) * field.phi1[i];
        cplx left = phi * (CF[i] + mu_w * CW[i]);
        cplx rite = phi * (TF[i] + mu_w * TW[i]);
        right[i] = rite;
        sol.Phi[i] = (g.y(i) <= pt.y_c) ? left : rite;
    }
    // consistency of the two expressions at the node nearest y_c
    int jstar = g.cell(pt.y_c);
    cplx phiL = D(g.y(jstar)) * field.phi1[jstar] *
                (CF[jstar] + mu_w * CW[jstar]);
    double scale = 0.0;
    for (const cplx& v : sol.Phi) scale = std::max(scale, std::abs(v));
    sol.consistency_defect = std::abs(phiL - right[jstar]) / std::max(scale, 1e-300);
    return sol;
}

std::vector<cplx> phi_pm_limit(const Phi1Field& field, const std::vector<cplx>& f_grid,
                               Side side) {
    if (!field.point.real_c())
        throw std::invalid_argument("phi_pm_limit: c must be real");
    if (side == Side::none)
        throw std::invalid_argument("phi_pm_limit: a side is required");
    check_f(field.grid, f_grid, "phi_pm_limit");
    const Grid& g = field.grid;
    const SpectralPoint& pt = field.point;
    const double cr = pt.c.real();
    const double omc2 = 1.0 - cr * cr;
    const UMinusC D(pt);

    const cplx Tpv = calT(field, f_grid).pv;
    const cplx fyc = g.interp(f_grid, pt.y_c);
    const double A = a_of(field);
    const double sgn = (side == Side::plus) ? 1.0 : -1.0;
    const cplx mu_pm = -(omc2 * omc2 * Tpv + sgn * cplx(0.0, kPi) * fyc) /
                       (A + sgn * cplx(0.0, 2.0 * kPi * cr));

    std::vector<double> gam = gamma_column(field);
    VolterraFn F1(g, pt.y_c, [&](double w) {
        return g.interp(field.phi1, w) * g.interp(f_grid, w);
    });
    auto qf = [&](double z) {
        cplx p1 = g.interp(field.phi1, z);
        return F1.at(z) / (D.sq(z) * p1 * p1);
    };
    const int n = g.size();
    const int jc = g.cell(pt.y_c);
    std::vector<cplx> out(n, cplx(std::nan(""), 0.0));
    // left branch: cumulative from ymin, never crossing y_c
    cplx acc(0.0);
    for (int i = 0; i <= jc; ++i) {
        if (i > 0) acc += integrate_gl(qf, g.y(i - 1), g.y(i), 6);
        if (g.y(i) < pt.y_c - 1e-12)
            out[i] = D(g.y(i)) * field.phi1[i] * acc + mu_pm * gam[i];
    }
    // right branch: cumulative from ymax downward
    acc = 0.0;
    for (int i = n - 1; i > jc; --i) {
        if (i < n - 1) acc -= integrate_gl(qf, g.y(i), g.y(i + 1), 6);
        if (g.y(i) > pt.y_c + 1e-12)
            out[i] = D(g.y(i)) * field.phi1[i] * acc + mu_pm * gam[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kernel table

KernelTable build_kernel_table(const KernelTableParams& params, const RealFn& omega0) {
    const int alpha = params.alpha;
    const SolveParams& sp = params.solve;
    if (alpha < 1) throw std::invalid_argument("build_kernel_table: alpha >= 1 required");

    KernelTable tab;
    tab.params = params;

    // c-quadrature layout: c = sin(theta), uniform theta panels.  The panel
    // count is sized from the largest gap between consecutive Gauss nodes so
    // that adjacent c-nodes stay within the per-oscillation budget.
    const double theta_max = std::asin(sp.c_max);
    const double needed_dc = 2.0 * kPi / (params.points_per_osc * std::max(params.t_max, 1.0));
    const GaussRule& gr0 = gauss_rule(params.gl_per_panel);
    double gap_frac = 1.0 + gr0.x.front();  // cross-boundary gap
    for (size_t k = 0; k + 1 < gr0.x.size(); ++k)
        gap_frac = std::max(gap_frac, gr0.x[k + 1] - gr0.x[k]);
    gap_frac *= 0.5;  // per unit panel width
    int n_panels = std::max(params.min_panels,
                            int(std::ceil(gap_frac * 2.0 * theta_max / needed_dc)));
    if (n_panels % 2) ++n_panels;  // keep c = 0 a panel edge, never a node
    const GaussRule& gr = gr0;
    for (int p = 0; p < n_panels; ++p) {
        double t0 = -theta_max + 2.0 * theta_max * p / n_panels;
        double t1 = -theta_max + 2.0 * theta_max * (p + 1) / n_panels;
        double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        for (size_t k = 0; k < gr.x.size(); ++k) {
            double th = mid + half * gr.x[k];
            tab.c.push_back(std::sin(th));
            tab.cw.push_back(half * gr.w[k] * std::cos(th));
        }
    }
    const int nc = static_cast<int>(tab.c.size());

    // common y-grid: node layout symmetric about 0 so that data sampling and
    // a0/b0 see y = 0 exactly; sized from the configured c_max so that tables
    // with the same solve parameters share grids regardless of node count
    const double yc_max = critical_point(sp.c_max);
    const double half_width = std::max(25.0 / alpha, 20.0) + yc_max;
    const double h = sp.alpha_h / alpha;
    tab.ygrid = Grid::symmetric(half_width, h);
    const Grid& g = tab.ygrid;

    std::vector<cplx> data(g.size());
    for (int i = 0; i < g.size(); ++i) data[i] = omega0(g.y(i));
    tab.omega0 = data;

    tab.W1.resize(nc);
    tab.A.resize(nc);
    tab.chi0v.resize(nc);
    tab.chi1v.resize(nc);
    tab.T_pv.resize(nc);
    tab.mu.resize(nc);
    tab.gamma.resize(nc);

    parallel_for(nc, [&](std::size_t j) {
        const double c = tab.c[j];
        SpectralPoint p = make_spectral_point(cplx(c, 0.0), alpha, sp.eps0, sp.C_o);
        Phi1Field f = solve_phi1(p, g, sp.tol, sp.max_iter);
        tab.W1[j] = w1(f).real();
        tab.A[j] = a_of(f);
        tab.T_pv[j] = calT(f, data).pv;
        tab.gamma[j] = gamma_column(f);
        tab.chi0v[j] = chi0(c);
        tab.chi1v[j] = chi1(c);
        tab.mu[j] = mu_of(c, alpha, tab.T_pv[j], tab.A[j], g.interp(data, p.y_c));
    }, sp.threads);

    // resolved alpha*t from the largest central node gap
    double dc_max = 0.0;
    for (int j = 0; j + 1 < nc; ++j)
        if (std::abs(tab.c[j]) < 0.9 || std::abs(tab.c[j + 1]) < 0.9)
            dc_max = std::max(dc_max, tab.c[j + 1] - tab.c[j]);
    tab.resolved_alpha_t = 2.0 * kPi / (params.points_per_osc * dc_max);

    {
        const int n = g.size();
        const int i0 = (n - 1) / 2;
        std::vector<cplx> integ(n - i0);
        integ[0] = (data[i0 + 1] - data[i0 - 1]) / g.h();
        for (int k = 1; k < n - i0; ++k)
            integ[k] = (data[i0 + k] - data[i0 - k]) / std::sinh(g.y(i0 + k));
        Grid half(0.0, g.h(), n - i0);
        tab.a0 = half.integrate(integ);
        tab.b0 = data[i0];
    }

    if (alpha != 1) return tab;

    // --- alpha = 1 extras: micro tables on [-0.13, 0.13] and the tilde
    // quantities with the c_switch convention -----------------------------
    const double micro_half = 0.13, micro_step = 2.5e-3;
    const int nm = 2 * int(std::round(micro_half / micro_step)) + 1;
    Grid mg(-micro_half, micro_step, nm);
    std::vector<double> A_micro(nm);
    std::vector<cplx> T_micro(nm);
    std::vector<std::vector<double>> G_micro(nm);
    parallel_for(nm, [&](std::size_t i) {
        const double c = mg.y(int(i));
        SpectralPoint p = make_spectral_point(cplx(c, 0.0), alpha, sp.eps0, sp.C_o);
        Phi1Field f = solve_phi1(p, g, sp.tol, sp.max_iter);
        A_micro[i] = a_of(f);
        T_micro[i] = calT(f, data).pv;
        G_micro[i] = gamma_column(f);
    }, sp.threads);
    tab.gamma0 = G_micro[nm / 2];  // c = 0 is the middle micro node
    tab.T0 = T_micro[nm / 2];

    auto A_at = [&](double x) { return mg.interp(A_micro, x); };
    auto T_at = [&](double x) { return mg.interp(T_micro, x); };
    const double hfd = sp.fd_step;
    auto dA = [&](double x) {
        return (-A_at(x + 2 * hfd) + 8 * A_at(x + hfd) - 8 * A_at(x - hfd) +
                A_at(x - 2 * hfd)) / (12 * hfd);
    };
    auto d2A = [&](double x) {
        return (-A_at(x + 2 * hfd) + 16 * A_at(x + hfd) - 30 * A_at(x) +
                16 * A_at(x - hfd) - A_at(x - 2 * hfd)) / (12 * hfd * hfd);
    };
    auto dT = [&](double x) {
        return (-T_at(x + 2 * hfd) + 8.0 * T_at(x + hfd) - 8.0 * T_at(x - hfd) +
                T_at(x - 2 * hfd)) / (12.0 * hfd);
    };
    auto dG = [&](double x) {
        std::vector<double> col(g.size());
        auto colat = [&](double xx) {
            Grid::Stencil st = mg.stencil(xx);
            std::vector<double> out(g.size(), 0.0);
            for (int k = 0; k < 6; ++k) {
                const std::vector<double>& src = G_micro[st.base + k];
                for (int i = 0; i < g.size(); ++i) out[i] += st.w[k] * src[i];
            }
            return out;
        };
        std::vector<double> a = colat(x + 2 * hfd), b = colat(x + hfd),
                            c2 = colat(x - hfd), d = colat(x - 2 * hfd);
        for (int i = 0; i < g.size(); ++i)
            col[i] = (-a[i] + 8 * b[i] - 8 * c2[i] + d[i]) / (12 * hfd);
        return col;
    };

    const GaussRule& r8 = gauss_rule(8);
    tab.A_t.assign(nc, 0.0);
    tab.A_tt.assign(nc, 0.0);
    tab.T_t.assign(nc, cplx(0.0));
    tab.Lam1t.assign(nc, cplx(0.0));
    tab.Q.resize(nc);
    for (int j = 0; j < nc; ++j) {
        const double c = tab.c[j];
        if (std::abs(c) >= 0.55) continue;  // outside supp chi0 (with margin)
        if (std::abs(c) >= sp.c_switch) {
            tab.A_t[j] = tab.A[j] / c;
            tab.A_tt[j] = tab.A[j] / (c * c);
            tab.T_t[j] = (tab.T_pv[j] - tab.T0) / c;
            tab.Q[j].resize(g.size());
            for (int i = 0; i < g.size(); ++i)
                tab.Q[j][i] = (tab.gamma[j][i] - tab.gamma0[i]) / c;
        } else {
            double at = 0.0;
            cplx tt(0.0);
            for (size_t k = 0; k < r8.x.size(); ++k) {
                double s = 0.5 * (1.0 + r8.x[k]);
                at += 0.5 * r8.w[k] * dA(s * c);
                tt += 0.5 * r8.w[k] * dT(s * c);
            }
            double att = 0.0;
            for (size_t a = 0; a < r8.x.size(); ++a) {
                double s = 0.5 * (1.0 + r8.x[a]);
                for (size_t b = 0; b < r8.x.size(); ++b) {
                    double t = 0.5 * (1.0 + r8.x[b]);
                    att += 0.25 * r8.w[a] * r8.w[b] * s * d2A(s * t * c);
                }
            }
            tab.A_t[j] = at;
            tab.A_tt[j] = att;
            tab.T_t[j] = tt;
            // Q column: int_0^1 d_c Gamma(y, s c) ds
            tab.Q[j].assign(g.size(), 0.0);
            for (size_t k = 0; k < r8.x.size(); ++k) {
                double s = 0.5 * (1.0 + r8.x[k]);
                std::vector<double> dcol = dG(s * c);
                for (int i = 0; i < g.size(); ++i)
                    tab.Q[j][i] += 0.5 * r8.w[k] * dcol[i];
            }
        }
        const double y_cj = critical_point(c);
        const double omc2 = 1.0 - c * c;
        tab.Lam1t[j] = 2.0 * tab.T_t[j] -
                       tab.A_tt[j] * g.interp(data, y_cj) / (omc2 * omc2);
    }
    return tab;
}

}  // namespace tanhflow
