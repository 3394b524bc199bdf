#include "gcsensor/params.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gcsensor/errors.hpp"

namespace gcs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        raise(ErrorCode::ValidationError, std::string(name) + " is not finite");
    }
}
}  // namespace

double reduce_phase(double phase) {
    double r = std::fmod(phase, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    // fmod can round up to the period itself for tiny negative inputs
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
}

SensorParams build_params(const RawParams& raw) {
    for (auto [v, name] : {std::pair{raw.delta, "delta"}, {raw.delta12, "delta12"},
                           {raw.j_coupling, "j_coupling"}, {raw.gamma_gain, "gamma_gain"},
                           {raw.gamma_loss, "gamma_loss"}, {raw.kappa, "kappa"},
                           {raw.phi, "phi"}, {raw.tau, "tau"}, {raw.beta, "beta"}}) {
        require_finite(v, name);
    }
    if (raw.kappa <= 0.0) {
        raise(ErrorCode::ZeroKappa, "kappa must be > 0, got " + std::to_string(raw.kappa));
    }
    if (raw.gamma_gain < 0.0 || raw.gamma_loss < 0.0 || raw.tau < 0.0 || raw.beta < 0.0) {
        std::ostringstream msg;
        msg << "rates must be nonnegative (gamma_gain=" << raw.gamma_gain
            << ", gamma_loss=" << raw.gamma_loss << ", tau=" << raw.tau
            << ", beta=" << raw.beta << ")";
        raise(ErrorCode::NegativeRate, msg.str());
    }

    SensorParams p;
    p.delta = raw.delta;
    p.delta12 = raw.delta12;
    p.j_coupling = raw.j_coupling;
    p.gamma_gain = raw.gamma_gain;
    p.gamma_loss = raw.gamma_loss;
    p.kappa = raw.kappa;
    p.phi = reduce_phase(raw.phi);
    p.tau = raw.tau;
    p.beta = raw.beta;
    p.v_matrix = raw.v_matrix.value_or(Mat2::ones());
    p.h_free = raw.h_free.value_or(Mat2{0.0, raw.j_coupling, raw.j_coupling, 0.0});

    if (!p.v_matrix.is_hermitian(kHermitianTol)) {
        raise(ErrorCode::NonHermitianInput, "v_matrix is not Hermitian to 1e-12");
    }
    if (!p.h_free.is_hermitian(kHermitianTol)) {
        raise(ErrorCode::NonHermitianInput, "h_free is not Hermitian to 1e-12");
    }
    return p;
}

}  // namespace gcs
