#pragma once

#include <array>
#include <string>

#include "gcsensor/transfer.hpp"

namespace gcs {

/// Output-noise decomposition in units of kappa/2T. total_measured is the
/// real part of total_complex; the shot term is the constant 1.
struct NoiseBreakdown {
    double shot = 1.0;
    double reflective_gain = 0.0;  // 2*Xi*theta[Xi], Heaviside-gated (theta[0] := 0)
    cplx dissipative{};            // delay-phased third term; real for the Small topology
    cplx total_complex{};
    double total_measured = 0.0;
    double xi = 0.0;  // |chi11 - 1|^2 - 1
};

/// Steady-state figures of merit at omega = 0. The window length T, the
/// perturbation strength epsilon and the diverging drive normalization are
/// folded into the unit labels, never evaluated:
///   rel_signal_per_photon  in units of 2 eps^2 / T
///   noise                  in units of kappa / 2T
///   n_tot_reduced          in units of |2 pi beta delta[0]|^2
///   lambda_reduced         in units of 2 pi beta delta[0]
struct MetricsReport {
    Mat2 chi;
    cplx lambda_reduced{};
    double homodyne_angle = 0.0;  // -arg(lambda)
    double rel_signal_per_photon = 0.0;
    NoiseBreakdown noise;
    double rel_snr_per_photon = 0.0;
    double n_tot_reduced = 0.0;
};

/// Linear response coefficient lambda_reduced = (i/kappa) * (chi V chi)_11.
cplx response_coefficient(const SensorParams& p, Topology topo, TransferConvention conv);

/// Central finite difference -d(chi11)/d(eps) at eps = 0 with step eps_step;
/// the independent route to the same quantity.
cplx response_coefficient_fd(const SensorParams& p, Topology topo, TransferConvention conv,
                             double eps_step);

/// |(chi V chi)_11|^2 / (chi^dagger chi)_11, nonnegative.
double relative_signal_per_photon(const SensorParams& p, Topology topo, TransferConvention conv);

/// Full reduced-form noise breakdown.
NoiseBreakdown output_noise(const SensorParams& p, Topology topo, TransferConvention conv);

/// Noise from the un-reduced matrix expression: gain term via
/// (chi G_Y chi^dagger)_11 with no Heaviside gate, dissipative term with the
/// squared phase prefactor. Used to test the claimed reduction.
cplx output_noise_matrix_form(const SensorParams& p, Topology topo, TransferConvention conv);

/// rel_signal / total_measured. Throws NonpositiveNoise when the measured
/// noise is not positive.
double relative_snr_per_photon(const SensorParams& p, Topology topo, TransferConvention conv);

/// One-shot evaluation of every metric from a single transfer matrix.
MetricsReport evaluate_metrics(const SensorParams& p, Topology topo, TransferConvention conv);

// --- convention calibration -------------------------------------------------

struct CalibrationAnchor {
    double gamma_factor;   // gamma_loss / gamma_gain
    double phi_over_pi;
    double quoted;         // reference measured noise
    double general_value;
    double explicit_value;
};

struct CalibrationReport {
    bool general_ok = false;
    bool explicit_ok = false;
    TransferConvention selected = TransferConvention::GeneralForm;
    std::array<CalibrationAnchor, 3> anchors{};
    std::string to_text() const;
};

/// Evaluate the reference noise anchors under both conventions; the one
/// reproducing all three within +-0.05 is selected.
CalibrationReport calibrate_convention();

/// Cached calibration winner. Throws ValidationError (with both conventions'
/// values in the message) if neither convention reproduces the anchors.
TransferConvention default_convention();

}  // namespace gcs
