#ifndef TANHFLOW_WRONSKIAN_HPP
#define TANHFLOW_WRONSKIAN_HPP

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "tanhflow/rayleigh.hpp"

namespace tanhflow {

enum class WronskianMethod { direct, via_w1 };
enum class Side { none, plus, minus };

struct WronskianValue {
    SpectralPoint point;
    cplx W;
    cplx W1;
    cplx A;  // continuous-extension function, real for real c
    WronskianMethod method = WronskianMethod::direct;
};

// W1(c, alpha): the regular part of the Wronskian,
//   int (u+c)^2/phi1^2 + (1+u^2-2c^2) u' (u-c)^{-2} (phi1^{-2}-1) dy,
// absolutely integrable on O~ including real c (the second factor vanishes
// quadratically at y_c and is evaluated through the field's T phi1).
cplx w1(const Phi1Field& field);

// W(c, alpha) = int phi(y,c)^{-2} dy for Im c != 0, with panels refined to
// the |Im c| scale around y_c.
cplx wronskian_direct(const Phi1Field& field);

// W = (1-c^2)^{-2} (W1 + 2c Log((c-1)/(c+1))), principal branch; for real c
// a side must be given and the one-sided limit (A ± 2*pi*c*i) is returned.
cplx wronskian_via_w1(const Phi1Field& field, Side side = Side::none);

// A(c, alpha) for real c, via the decomposition in which the principal value
// is carried analytically by the 2c*log((1-c)/(1+c)) term.
double a_of(const Phi1Field& field);

struct SolveParams {
    double alpha_h = 0.025;   // grid spacing times alpha
    double tol = 1e-10;
    int max_iter = 200;
    double eps0 = 0.25;
    double C_o = 8.0;
    double c_max = 0.999;
    double c_switch = 0.05;   // switchover for the tilde quantities
    double fd_step = 1e-2;    // finite-difference step in c
    int threads = 0;
};

// Memoized evaluator for A(c, alpha) and the derived quantities
// A~ = A/c and A~~ = A/c^2.  Near c = 0 the quotients are replaced by the
// derivative-average forms with 5-point finite differences of A; those
// stencil evaluations go through a fine micro-table of A on [-0.13, 0.13]
// built on first use.
class AEvaluator {
  public:
    AEvaluator(int alpha, SolveParams params = {});

    double A(double c) const;
    double dA(double c) const;    // 5-point stencil, step params.fd_step
    double d2A(double c) const;
    double A_tilde(double c) const;
    double A_ttilde(double c) const;
    int alpha() const { return alpha_; }
    const SolveParams& params() const { return params_; }

  private:
    double A_direct(double c) const;
    void ensure_micro() const;

    int alpha_;
    SolveParams params_;
    mutable std::mutex mtx_;
    mutable std::map<long long, double> memo_;  // keyed on quantized c
    mutable std::vector<double> micro_;         // A on the micro c-grid
    mutable bool micro_built_ = false;
    static constexpr double kMicroHalf = 0.13;
    static constexpr double kMicroStep = 2.5e-3;
};

// Diagnostics of the limit W(i*eps, 1)/(i*eps) -> 2*pi*i.
struct WronskianLimitDiagnostics {
    std::vector<double> eps;
    std::vector<cplx> ratio;      // W(i eps)/(i eps)
    cplx extrapolated;            // Richardson limit
    double rel_error_raw;         // |ratio.back() - 2 pi i| / 2 pi
    double rel_error_extrapolated;
};

WronskianLimitDiagnostics wronskian_limit_check(const std::vector<double>& eps_list,
                                                const SolveParams& params = {});

}  // namespace tanhflow

#endif
