#ifndef TANHFLOW_EVOLUTION_HPP
#define TANHFLOW_EVOLUTION_HPP

#include <string>
#include <vector>

#include "tanhflow/kernels.hpp"

namespace tanhflow {

// Norms on a grid (L2 by the grid rule, H1 with centered differences).
double l2_norm(const Grid& g, const std::vector<cplx>& f);
double h1_norm(const Grid& g, const std::vector<cplx>& f);

// Initial vorticity for one mode with its conserved functionals
//   a0 = p.v. int omega0 / sinh y dy,  b0 = omega0(0).
struct InitialData {
    int alpha = 1;
    std::vector<cplx> omega0;
    cplx a0{0.0, 0.0};
    cplx b0{0.0, 0.0};
};

// a0 computed through the antisymmetrized form int_{y>0} (w(y)-w(-y))/sinh y;
// the grid must be symmetric about y = 0 with a node at 0.
std::pair<cplx, cplx> a0_b0(const std::vector<cplx>& omega0, const Grid& grid);

InitialData make_initial_data(int alpha, const Grid& grid, const RealFn& fn);

// Named analytic data families: gaussian, odd_gaussian, sech_cubed, bump.
RealFn family_fn(const std::string& name);

// S(t) = -i int sin(ct) chi0(c) (1-c^2)^2 / c dc  (the cosine part vanishes
// by parity; the integrand is bounded, no principal value needed).
cplx s_of(double t);

// The omega0-independent slowly decaying field of the mode-1 dynamics:
//   f1(t,y) = (1/2 pi^2) ( Psi(t,y) + (S(t) + i pi) sech y ),
//   Psi(t,y) = -int e^{-ict} chi0 (1-c^2)^2 (Gamma(y,c)-Gamma(y,0))/c dc.
// Requires an alpha = 1 kernel table.
// y_refine > 1 evaluates on a grid refined by that factor (each Gamma/Q
// column is smooth in y; the filament oscillations of the assembled field
// appear only in the c-sum, so refined sampling keeps the centered-difference
// H1 norms accurate at large alpha*t).  y_refine = 0 picks the factor from
// alpha*t automatically.
std::vector<cplx> f1_eval(const KernelTable& table, double t, int y_refine = 1);
Grid refined_grid(const Grid& g, int refine);
int auto_refine(const KernelTable& table, double t);

// ((a0 + i pi b0)/(2 pi i)) sech y.
std::vector<cplx> eigen_projection(cplx a0, cplx b0, const Grid& grid);

// One mode at one time; for alpha = 1 the three bookkeeping parts
// (projection, rank-one, regular) are recorded and sum to psi exactly.
struct ModeField {
    int alpha = 1;
    double t = 0.0;
    Grid grid;
    std::vector<cplx> psi;
    std::vector<cplx> projection;  // alpha = 1 only
    std::vector<cplx> rank_one;    // alpha = 1 only (a0 * f1)
    std::vector<cplx> regular;     // alpha = 1 only
};

ModeField psi_mode(const KernelTable& table, double t, int y_refine = 1);

// || V ||_{L2}^2 = 2 sum_alpha (alpha^2 ||psi||^2 + ||d_y psi||^2),
// || V^2 ||_{L2}^2 = 2 sum_alpha alpha^2 ||psi||^2.
std::pair<double, double> velocity_norms(const std::vector<ModeField>& fields);

}  // namespace tanhflow

#endif
