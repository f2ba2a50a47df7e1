#ifndef TANHFLOW_RAYLEIGH_HPP
#define TANHFLOW_RAYLEIGH_HPP

#include <vector>

#include "tanhflow/flow.hpp"
#include "tanhflow/grid.hpp"

namespace tanhflow {

// Converged solution of phi1 = 1 + alpha^2 T phi1 sampled on a y-grid.
//
// Besides phi1 and d_y phi1, the field keeps the two cumulative integrals of
// the final sweep:
//   inner(y) = int_{y_c}^{y} phi1(w) (u(w)-c)^2 dw
//   tphi(y)  = (T phi1)(y) = (phi1(y) - 1) / alpha^2
// The latter gives (phi1 - 1) without cancellation near y_c, which the
// Wronskian/kernel integrands rely on.
struct Phi1Field {
    SpectralPoint point;
    Grid grid;
    std::vector<cplx> phi1;
    std::vector<cplx> dphi1;
    std::vector<cplx> tphi;
    std::vector<cplx> inner;
    int iterations = 0;
    double residual = 0.0;               // relative sup-update at exit
    std::vector<double> update_history;  // relative sup-update per iteration

    cplx phi1_at(double y) const { return grid.interp(phi1, y); }
    cplx dphi1_at(double y) const { return grid.interp(dphi1, y); }
    // (phi1(y)-1), accurate arbitrarily close to y_c.
    cplx phi1_minus1_at(double y) const {
        double a2 = double(point.alpha) * point.alpha;
        return a2 * grid.interp(tphi, y);
    }
};

// (T f)(y) at every grid node through the double-parameter kernel form
//   T f(y) = (y-y_c)^2 int_0^1 int_0^1 s [D(w_ts)/D(z_s)]^2 f(w_ts) dt ds,
// w_ts = y_c + t s (y-y_c), z_s = y_c + s (y-y_c).  No division by a
// vanishing (u(z)-c)^2 occurs: the ratio is evaluated from the exact
// sinh form of u - c.  Quadrature order grows with alpha|y-y_c|.
std::vector<cplx> apply_T(const std::vector<cplx>& f, const SpectralPoint& point,
                          const Grid& grid, int base_order = 16);

// Picard iteration phi1^{k+1} = 1 + alpha^2 T phi1^{k}, stopping when the
// relative sup-norm update drops below tol.
Phi1Field solve_phi1(const SpectralPoint& point, const Grid& grid,
                     double tol = 1e-10, int max_iter = 200);

// Convenience: default grid for a solve at this point (uniform, spacing
// alpha*h = alpha_h, half-width max(25/alpha, 20) around y_c).
Grid default_grid(const SpectralPoint& point, double alpha_h = 0.025);

// (phi, d_y phi) = ((u-c) phi1, u' phi1 + (u-c) d_y phi1) at y.
std::pair<cplx, cplx> phi_hom(const Phi1Field& field, double y);

// phi1 at arbitrary y.  Near y_c the value is reconstructed from the field's
// cumulative integrals, phi1 = 1 + alpha^2 (tphi(node) + int inner/D^2),
// which keeps the sub-grid Im(c)-scale structure that plain interpolation
// of phi1 cannot represent.  Away from y_c it falls back to interpolation.
class Phi1Eval {
  public:
    explicit Phi1Eval(const Phi1Field& field);
    cplx operator()(double y) const;
    cplx tphi_at(double y) const;  // reconstructed (T phi1)(y)

  private:
    const Phi1Field& f_;
    UMinusC D_;
    double a2_;
    double band_;
    double min_w_;
};

// Max over admissible nodes of |phi1'' - alpha^2 phi1 + 2u'/(u-c) phi1'|
// relative to max(1, |phi1|), with phi1'' from second differences and phi1'
// from the field. Nodes within `band` of y_c and the outermost nodes are
// excluded.
double ode_residual(const Phi1Field& field, double band = 1e-3);

}  // namespace tanhflow

#endif
