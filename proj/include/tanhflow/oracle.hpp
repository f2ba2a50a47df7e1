#ifndef TANHFLOW_ORACLE_HPP
#define TANHFLOW_ORACLE_HPP

#include <vector>

#include "tanhflow/flow.hpp"
#include "tanhflow/grid.hpp"

namespace tanhflow {

// Direct time integrator of the linearized vorticity equation
//   d_t omega = -i alpha (u omega + u'' psi),   psi = (2 alpha)^{-1} int e^{-alpha|y-z|} omega dz,
// used as the ground-truth oracle for the spectral formulas.

struct VorticityState {
    int alpha = 1;
    double t = 0.0;
    Grid grid;
    std::vector<cplx> omega;
    std::vector<cplx> psi;
};

// The exponential-kernel elliptic inverse as a reusable operator: the
// two-pass prefix recursion collapses, on a uniform grid, to one 6-tap
// stencil per node and pass (O(N), no dense kernel).
class GreensOp {
  public:
    GreensOp(const Grid& grid, int alpha);
    std::vector<cplx> apply(const std::vector<cplx>& omega) const;
    const Grid& grid() const { return grid_; }
    int alpha() const { return alpha_; }

  private:
    Grid grid_;
    int alpha_;
    double decay_;                 // e^{-alpha h}
    // per-cell quadrature taps for the up-going and down-going passes;
    // interior cells share one tap set, edge cells get their own
    std::vector<std::array<double, 6>> up_taps_, down_taps_;
    std::vector<int> base_;
};

std::vector<cplx> greens_inverse(const std::vector<cplx>& omega, int alpha,
                                 const Grid& grid);

std::vector<cplx> rhs(const VorticityState& state);

struct Trajectory {
    std::vector<VorticityState> snapshots;
    double boundary_mass = 0.0;  // max |omega| at the outermost nodes / max |omega|
};

// Classical 4-stage RK4; dt defaults to 0.5/alpha when <= 0. Snapshots are
// emitted at the requested times (t = 0 included automatically if absent).
Trajectory evolve(const std::vector<cplx>& omega0, int alpha, const Grid& grid,
                  std::vector<double> out_times, double dt = 0.0);

// (a(t), b(t)) per snapshot for an alpha = 1 trajectory.
std::vector<std::pair<cplx, cplx>> conserved_ab(const Trajectory& traj);

}  // namespace tanhflow

#endif
