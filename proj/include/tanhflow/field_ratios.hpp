#ifndef TANHFLOW_FIELD_RATIOS_HPP
#define TANHFLOW_FIELD_RATIOS_HPP

#include "tanhflow/rayleigh.hpp"

namespace tanhflow {

// Removable-singularity ratios of a converged phi1 field.  (phi1 - 1) is
// always taken from alpha^2 * tphi, which vanishes quadratically at y_c by
// construction, so none of these ratios loses accuracy near the critical
// point.
struct FieldRatios {
    const Phi1Field& f;
    UMinusC D;
    double a2;

    explicit FieldRatios(const Phi1Field& field)
        : f(field), D(field.point), a2(double(field.point.alpha) * field.point.alpha) {}

    // 1/phi1^2 - 1
    cplx q(int i) const {
        cplx p = f.phi1[i];
        return -a2 * f.tphi[i] * (p + 1.0) / (p * p);
    }
    // (1/phi1^2 - 1)/(u-c)^2 with its finite value at y_c
    cplx rm(int i) const {
        const double y = f.grid.y(i);
        if (f.point.real_c() && std::abs(y - f.point.y_c) < 1e-12) {
            const double up = 1.0 - f.point.c.real() * f.point.c.real();
            return -a2 / (3.0 * up * up);
        }
        return q(i) / D.sq(y);
    }
    // (1/phi1^2 - 1)/(u-c), vanishing at y_c
    cplx rm1(int i) const {
        const double y = f.grid.y(i);
        if (f.point.real_c() && std::abs(y - f.point.y_c) < 1e-12) return 0.0;
        return q(i) / D(y);
    }
};

}  // namespace tanhflow

#endif
