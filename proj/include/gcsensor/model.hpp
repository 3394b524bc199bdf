#pragma once

#include "gcsensor/params.hpp"

namespace gcs {

/// Gain matrix Y Y^dagger for equal real couplings Y = sqrt(gamma_gain/2pi).
/// Hermitian, rank <= 1.
Mat2 gain_matrix(const SensorParams& p);

/// Dissipation matrix of the giant layout at frequency omega (units of
/// kappa). m12 is identically zero; m21 carries the directional coupling
/// a2 -> a1, so the matrix is non-Hermitian for generic phases.
Mat2 dissipation_matrix_giant(const SensorParams& p, double omega);

/// Single-point dissipation matrix (1/2) Z Z^dagger. Hermitian, rank <= 1.
Mat2 dissipation_matrix_small(const SensorParams& p);

// Generalized builders for complex couplings. The default builders above
// assume equal real couplings; these are the advanced path and are not
// validated against the reference figures.
Mat2 gain_matrix_from(cplx y1, cplx y2);
Mat2 dissipation_matrix_giant_from(cplx z1, cplx z2, double theta, double omega_tau);
Mat2 dissipation_matrix_small_from(cplx z1, cplx z2);

}  // namespace gcs
