#ifndef TANHFLOW_FLOW_HPP
#define TANHFLOW_FLOW_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace tanhflow {

using cplx = std::complex<double>;

// Pointwise values of u(y)=tanh y and its first three derivatives.
struct FlowSample {
    double y;
    double u;    // tanh y
    double du;   // u'  = 1 - u^2 = sech^2 y
    double d2u;  // u'' = -2 u u'
    double d3u;  // u''' = -2 (u'^2 + u u'')
};

inline FlowSample eval_flow(double y) {
    if (!std::isfinite(y))
        throw std::invalid_argument("eval_flow: non-finite y");
    FlowSample s;
    s.y = y;
    s.u = std::tanh(y);
    const double sech = 1.0 / std::cosh(y);
    s.du = sech * sech;  // avoids the 1-u^2 cancellation for large |y|
    s.d2u = -2.0 * s.u * s.du;
    s.d3u = -2.0 * (s.du * s.du + s.u * s.d2u);
    return s;
}

// y_c = u^{-1}(c) = atanh(c), via 1/2 log((1+c)/(1-c)).
inline double critical_point(double c) {
    if (!(std::abs(c) < 1.0))
        throw std::invalid_argument("critical_point: |c| must be < 1, got " + std::to_string(c));
    if (1.0 - std::abs(c) < 1e-15)
        throw std::invalid_argument("critical_point: c too close to +-1 for double precision");
    return 0.5 * std::log((1.0 + c) / (1.0 - c));
}

// Membership in the spindle-shaped complex domain
//   O = { c + i*eps : c in (-1,1), 0 < |eps| < min(C_o^{-1}(1-c^2), eps0) },
// or in its closure O~ = O u (-1,1) when `inclusive` is set.
inline bool in_domain_O(cplx c, int /*alpha*/, double eps0, double C_o,
                        bool inclusive = false) {
    const double re = c.real(), im = c.imag();
    if (!(std::abs(re) < 1.0)) return false;
    if (im == 0.0) return inclusive;
    return std::abs(im) < std::min((1.0 - re * re) / C_o, eps0);
}

// A spectral parameter together with its critical point and the domain
// constants it was validated against.
struct SpectralPoint {
    cplx c;
    int alpha = 1;
    double y_c = 0.0;   // atanh(Re c)
    double eps0 = 0.25;
    double C_o = 8.0;

    bool real_c() const { return c.imag() == 0.0; }
};

inline SpectralPoint make_spectral_point(cplx c, int alpha, double eps0 = 0.25,
                                         double C_o = 8.0) {
    if (alpha < 1) throw std::invalid_argument("make_spectral_point: alpha must be >= 1");
    if (!in_domain_O(c, alpha, eps0, C_o, /*inclusive=*/true))
        throw std::invalid_argument("make_spectral_point: c outside O~(eps0)");
    SpectralPoint p;
    p.c = c;
    p.alpha = alpha;
    p.y_c = critical_point(c.real());
    p.eps0 = eps0;
    p.C_o = C_o;
    return p;
}

// u(y) - c evaluated without cancellation:
//   u(y) - Re c = sinh(y - y_c) / (cosh y * cosh y_c)      (exact identity)
// so the difference stays fully accurate arbitrarily close to y_c.
struct UMinusC {
    double y_c;
    double cosh_yc;
    double im;  // Im c

    explicit UMinusC(const SpectralPoint& p)
        : y_c(p.y_c), cosh_yc(std::cosh(p.y_c)), im(p.c.imag()) {}

    double re(double y) const { return std::sinh(y - y_c) / (std::cosh(y) * cosh_yc); }
    cplx operator()(double y) const { return cplx(re(y), -im); }
    cplx sq(double y) const { cplx d = (*this)(y); return d * d; }
};

}  // namespace tanhflow

#endif
