#include "gcsensor/transfer.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gcsensor/errors.hpp"
#include "gcsensor/model.hpp"

namespace gcs {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};
}  // namespace

Mat2 system_matrix(const SensorParams& p, Topology topo, TransferConvention conv,
                   double omega, double epsilon) {
    // rotating-frame detuning block (omega_L + omega)I - H[eps]
    Mat2 k{p.delta + omega, 0.0, 0.0, p.delta + p.delta12 + omega};
    k = k - p.h_free - epsilon * p.v_matrix;

    k = k - (kI * kPi) * gain_matrix(p);
    k.m11 += kI * (p.kappa / 2.0);

    const Mat2 d = topo == Topology::Giant ? dissipation_matrix_giant(p, omega)
                                           : dissipation_matrix_small(p);
    const cplx weight = conv == TransferConvention::GeneralForm ? kI * (2.0 * kPi)
                                                                : cplx(2.0 * kPi, 0.0);
    return k + weight * d;
}

Mat2 transfer_matrix(const SensorParams& p, Topology topo, TransferConvention conv,
                     double omega, double epsilon) {
    const Mat2 k = system_matrix(p, topo, conv, omega, epsilon);
    const cplx det = k.det();
    if (std::abs(det) <= 1e-14 * k.frobenius_sq()) {
        std::ostringstream msg;
        msg << "system matrix is singular (|det|=" << std::abs(det)
            << ") at delta=" << p.delta << " delta12=" << p.delta12
            << " J=" << p.j_coupling << " gamma_gain=" << p.gamma_gain
            << " gamma_loss=" << p.gamma_loss << " phi=" << p.phi
            << " omega=" << omega << " epsilon=" << epsilon
            << " topology=" << (topo == Topology::Giant ? "giant" : "small");
        raise(ErrorCode::SingularSystem, msg.str());
    }
    return (kI * p.kappa) * inverse(k);
}

cplx reflection_coefficient(const SensorParams& p, Topology topo, TransferConvention conv) {
    return 1.0 - transfer_matrix(p, topo, conv, 0.0, 0.0).m11;
}

}  // namespace gcs
