#ifndef TANHFLOW_KERNELS_HPP
#define TANHFLOW_KERNELS_HPP

#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "tanhflow/rayleigh.hpp"
#include "tanhflow/wronskian.hpp"

namespace tanhflow {

using RealFn = std::function<double(double)>;

// Cutoff pair: chi0 is 1 on (-1/4,1/4), 0 outside (-1/2,1/2), joined by the
// quintic smoothstep (C^2 at the joins); chi1 = 1 - chi0.
double chi0(double c);
double chi1(double c);

// Principal value and one-sided boundary values of the singular operator
//   T(f)(c) = p.v. int [int_{y_c}^{y} phi1 f dz] / ((u(y)-c)^2 phi1(y)^2) dy
// at real c, computed through the I1 + I2 + I3 split in which the pole is
// carried analytically by the log term.
struct TBoundary {
    cplx pv;
    cplx plus;   // lim eps->0+ of T(f)(c + i eps)
    cplx minus;  // lim eps->0-
};
TBoundary calT(const Phi1Field& field, const std::vector<cplx>& f_grid);

// Same operator at complex c in O (no principal value needed); equals the
// resolvent-side T(f)(c) of the inhomogeneous solution.
cplx calT_complex(const Phi1Field& field, const std::vector<cplx>& f_grid);

// Memoized evaluator of c -> T(f)(c) (pv) for a fixed data function, with a
// micro-table on [-0.13, 0.13] backing the finite-difference machinery of
// the tilde operator near c = 0.
class TEvaluator {
  public:
    TEvaluator(int alpha, RealFn data, SolveParams params = {});

    cplx T(double c) const;
    cplx dT(double c) const;     // 5-point stencil, step params.fd_step
    cplx T0() const { return T(0.0); }
    // (T(c) - T(0))/c, replaced by int_0^1 dT(s c) ds for |c| < c_switch
    cplx T_tilde(double c) const;
    const SolveParams& params() const { return params_; }

  private:
    cplx T_direct(double c) const;
    void ensure_micro() const;

    int alpha_;
    RealFn data_;
    SolveParams params_;
    mutable std::mutex mtx_;
    mutable std::map<long long, cplx> memo_;
    mutable std::vector<cplx> micro_;
    mutable bool micro_built_ = false;
    static constexpr double kMicroHalf = 0.13;
    static constexpr double kMicroStep = 2.5e-3;
};

// Green-type homogeneous solution of the Rayleigh equation (real c):
//   Gamma(y,c) = phi(y,c) * int_{-inf}^{y} phi^{-2} dz   (y < y_c)
//              = phi(y,c) * int_{+inf}^{y} phi^{-2} dz   (y > y_c),
// evaluated through the regularized antiderivative in which the pole part of
// phi^{-2} is integrated in closed form, so the value is accurate uniformly
// through y_c (where Gamma = -1/(1-c^2)).
std::vector<double> gamma_column(const Phi1Field& field);
double gamma_fn(const Phi1Field& field, double y);

// mu(c, alpha) = -(2c(1-c^2)^2 T(f)(c) - A f(y_c)) / (A^2 + 4 pi^2 c^2).
// Throws SingularBranch when alpha = 1 and the denominator underflows
// (embedding eigenvalue at c = 0).
struct SingularBranch : std::runtime_error {
    using std::runtime_error::runtime_error;
};
cplx mu_of(double c, int alpha, cplx T_pv, double A, cplx f_at_yc);

// Dual functionals.
cplx lambda1(double c, double A, cplx T_pv, cplx f_at_yc);
cplx lambda2(double c, double A, cplx T_uppg, cplx g_at_yc);
cplx lambda1_tilde(double c, double A_tt, cplx T_tilde, cplx f_at_yc);
cplx lambda2_tilde(double c, double A_t, cplx T_tilde_uppg, cplx g_at_yc);

enum class KernelVariant { full, K0, K0_tilde, K1 };

// Bilinear kernels assembled from the dual functionals; f and g are data
// functions on the line, c is real.
class KernelEvaluator {
  public:
    KernelEvaluator(int alpha, RealFn f, RealFn g, SolveParams params = {});
    cplx operator()(double c, KernelVariant variant) const;

  private:
    int alpha_;
    RealFn f_, g_;
    SolveParams params_;
    AEvaluator a_;
    TEvaluator tf_, tg_;  // tg_ acts on u'' g
    RealFn g_raw_;
};

// Inhomogeneous resolvent solution at complex c (Im c != 0).
struct InhomogeneousSolution {
    SpectralPoint point;
    Grid grid;
    std::vector<cplx> Phi;
    cplx mu_coeff;            // -T(f)(c)/W(c,alpha)
    double consistency_defect;  // |left - right| at the y_c checkpoint
};
InhomogeneousSolution solve_inhomogeneous(const Phi1Field& field,
                                          const std::vector<cplx>& f_grid);

// One-sided limit assembly Phi_pm at real c (away from the embedding
// eigenvalue), Eq. assembly used by the off-axis LAP check.
std::vector<cplx> phi_pm_limit(const Phi1Field& field, const std::vector<cplx>& f_grid,
                               Side side);

// ---------------------------------------------------------------------------
// Kernel tables: everything the stream-function quadratures need, sampled on
// a c-quadrature layout that clusters nodes at c = +-1 (c = sin(theta) with
// uniform theta panels).

struct KernelTableParams {
    int alpha = 2;
    double t_max = 100.0;       // largest alpha*t the table must resolve
    double points_per_osc = 10.0;
    int min_panels = 16;
    int gl_per_panel = 8;
    SolveParams solve;
};

struct KernelTable {
    KernelTableParams params;
    Grid ygrid;
    std::vector<double> c;   // quadrature nodes in (-c_max, c_max)
    std::vector<double> cw;  // weights: int g(c) dc ~= sum cw_j g(c_j)
    std::vector<double> W1, A, chi0v, chi1v;
    std::vector<cplx> T_pv;             // T(omega0)(c_j), pv
    std::vector<cplx> mu;               // mu(c_j, alpha)
    std::vector<std::vector<double>> gamma;  // [node][y index]
    // alpha = 1 extras (empty otherwise)
    std::vector<double> A_t, A_tt;
    std::vector<cplx> T_t, Lam1t;
    std::vector<std::vector<double>> Q;  // (Gamma(y,c)-Gamma(y,0))/c, chi0 support
    std::vector<double> gamma0;          // Gamma(y, 0)
    cplx T0{0.0, 0.0};                   // T(omega0)(0)
    // the data the table was built for, sampled on ygrid, with its
    // conserved functionals
    std::vector<cplx> omega0;
    cplx a0{0.0, 0.0}, b0{0.0, 0.0};
    double resolved_alpha_t = 0.0;       // largest alpha*t the node spacing resolves

    int alpha() const { return params.alpha; }
};

KernelTable build_kernel_table(const KernelTableParams& params, const RealFn& omega0);

// CSV / JSON exports (columns documented in the README).
void write_kernel_table_csv(const KernelTable& table, const std::string& path);

}  // namespace tanhflow

#endif
