#include "gcsensor/model.hpp"

#include <cmath>
#include <numbers>

namespace gcs {

namespace {
constexpr double kPi = std::numbers::pi;

// unit phasor with the phase reduced into [0, 2pi) before exponentiation
cplx phasor(double phase) { return std::polar(1.0, reduce_phase(phase)); }
}  // namespace

Mat2 gain_matrix_from(cplx y1, cplx y2) {
    return {y1 * std::conj(y1), y1 * std::conj(y2),
            y2 * std::conj(y1), y2 * std::conj(y2)};
}

Mat2 gain_matrix(const SensorParams& p) {
    const double y = std::sqrt(p.gamma_gain / (2.0 * kPi));
    return gain_matrix_from(y, y);
}

Mat2 dissipation_matrix_giant_from(cplx z1, cplx z2, double theta, double omega_tau) {
    const cplx e1 = phasor(theta - omega_tau);
    const cplx e2 = phasor(2.0 * theta - omega_tau);
    const cplx e3 = phasor(3.0 * theta - omega_tau);
    Mat2 d;
    d.m11 = std::norm(z1) * (1.0 + e1);
    d.m12 = 0.0;
    d.m21 = z2 * std::conj(z1) * (e1 + 2.0 * e2 + e3);
    d.m22 = std::norm(z2) * (1.0 + e1);
    return d;
}

Mat2 dissipation_matrix_giant(const SensorParams& p, double omega) {
    const double z = std::sqrt(p.gamma_loss / (2.0 * kPi));
    return dissipation_matrix_giant_from(z, z, p.delta * p.tau + p.phi, omega * p.tau);
}

Mat2 dissipation_matrix_small_from(cplx z1, cplx z2) {
    return 0.5 * gain_matrix_from(z1, z2);
}

Mat2 dissipation_matrix_small(const SensorParams& p) {
    const double z = std::sqrt(p.gamma_loss / (2.0 * kPi));
    return dissipation_matrix_small_from(z, z);
}

}  // namespace gcs
