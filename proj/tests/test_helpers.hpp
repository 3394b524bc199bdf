#pragma once

#include <numbers>
#include <random>

#include "gcsensor/params.hpp"

namespace gcs::test {

inline constexpr double kPi = std::numbers::pi;

/// Baseline operating point: delta = delta12 = 0, J = Gamma = gamma = 0.1,
/// kappa = 1.
inline SensorParams baseline() { return build_params(RawParams{}); }

inline SensorParams baseline_with(double gamma_loss, double phi) {
    RawParams raw;
    raw.gamma_loss = gamma_loss;
    raw.phi = phi;
    return build_params(raw);
}

struct ParamDraw {
    std::mt19937_64 rng;
    explicit ParamDraw(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    }

    /// Generic draw over the full working ranges (detunings included).
    SensorParams params() {
        RawParams raw;
        raw.delta = uniform(-1.0, 1.0);
        raw.delta12 = uniform(-1.0, 1.0);
        raw.j_coupling = uniform(0.0, 0.3);
        raw.gamma_gain = uniform(0.0, 0.3);
        raw.gamma_loss = uniform(0.0, 0.3);
        raw.phi = uniform(0.0, 2.0 * kPi);
        raw.tau = uniform(0.0, 0.3);
        return build_params(raw);
    }

    Topology topology() { return uniform(0.0, 1.0) < 0.5 ? Topology::Giant : Topology::Small; }
};

}  // namespace gcs::test
