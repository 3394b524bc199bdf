#pragma once

#include <optional>

#include "gcsensor/mat2.hpp"

namespace gcs {

/// Dissipative-coupling layout: two coupling points per cavity on a shared
/// reservoir (Giant, delay-phased) or a single shared point (Small).
enum class Topology { Giant, Small };

/// How the dissipative block enters the system matrix: GeneralForm carries
/// the factor i from the frequency-domain solution; ExplicitForm uses the
/// parameterized matrices as printed. The calibrated default is GeneralForm
/// (see calibrate_convention()).
enum class TransferConvention { GeneralForm, ExplicitForm };

/// All rates and detunings in units of kappa, tau in units of 1/kappa,
/// phi reduced into [0, 2pi). Values are immutable once built.
struct SensorParams {
    double delta = 0.0;       // drive detuning from cavity 1
    double delta12 = 0.0;     // cavity 1 - cavity 2 detuning
    double j_coupling = 0.1;  // direct cavity-cavity coupling
    double gamma_gain = 0.1;  // gain-reservoir rate, 2*pi*Y^2
    double gamma_loss = 0.1;  // dissipative-reservoir rate, 2*pi*Z^2
    double kappa = 1.0;       // readout-waveguide coupling (sets the unit)
    double phi = 0.0;         // fixed delay phase between coupling points
    double tau = 0.0;         // neighbor-point delay
    double beta = 1.0;        // classical drive amplitude
    Mat2 v_matrix = Mat2::ones();
    Mat2 h_free{0.0, 0.1, 0.1, 0.0};  // rotating frame: detunings live in delta, delta12
};

/// Raw named inputs for build_params. Defaults are the baseline operating
/// point (delta = delta12 = 0, J = Gamma = gamma = 0.1, kappa = 1).
struct RawParams {
    double delta = 0.0;
    double delta12 = 0.0;
    double j_coupling = 0.1;
    double gamma_gain = 0.1;
    double gamma_loss = 0.1;
    double kappa = 1.0;
    double phi = 0.0;
    double tau = 0.0;
    double beta = 1.0;
    std::optional<Mat2> v_matrix;  // defaults to all-ones
    std::optional<Mat2> h_free;    // defaults to [[0, J], [J, 0]]
};

inline constexpr double kHermitianTol = 1e-12;

/// Reduce a phase into [0, 2pi).
double reduce_phase(double phase);

/// Validate and normalize raw inputs. Throws NonHermitianInput, NegativeRate
/// or ZeroKappa.
SensorParams build_params(const RawParams& raw);

}  // namespace gcs
