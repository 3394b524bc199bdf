#pragma once

#include "gcsensor/params.hpp"

namespace gcs {

/// The matrix K(omega, epsilon) whose inverse gives the state-transfer
/// matrix. Never throws; singularity is detected in transfer_matrix.
Mat2 system_matrix(const SensorParams& p, Topology topo, TransferConvention conv,
                   double omega, double epsilon);

/// chi = i*kappa*K^{-1}. Throws SingularSystem (naming the parameter point)
/// when |det K| <= 1e-14 * ||K||_F^2.
Mat2 transfer_matrix(const SensorParams& p, Topology topo, TransferConvention conv,
                     double omega, double epsilon);

/// Coherent reflection amplitude of the readout drive, 1 - chi11 at
/// omega = 0, epsilon = 0.
cplx reflection_coefficient(const SensorParams& p, Topology topo, TransferConvention conv);

}  // namespace gcs
