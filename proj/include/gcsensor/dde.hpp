#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "gcsensor/params.hpp"

namespace gcs {

/// One sample of the mean-field trajectory in the rotating frame.
struct DelayState {
    double t = 0.0;
    cplx a1{}, a2{};
};

/// Optional mean-valued input signals. Empty functions mean vacuum inputs
/// (zero mean). Only the deterministic drive beta survives by default.
struct MeanInputs {
    std::function<cplx(double)> b_in;      // readout waveguide
    std::function<cplx(double)> c_in_dag;  // gain reservoir
    std::function<cplx(double)> d_in;      // dissipative reservoir
};

/// Trajectory on a uniform grid. Samples may be decimated for long runs;
/// final always holds the exact last state. tail_deriv_max carries
/// max |da/dt| per step over the trailing residual window.
struct Trajectory {
    std::vector<DelayState> samples;
    DelayState final;
    double dt = 0.0;
    double horizon = 0.0;
    double kappa = 1.0;
    double beta = 0.0;
    std::vector<double> tail_deriv;  // |da/dt| for the last ~5/kappa of the run
};

struct SteadyState {
    cplx a1{}, a2{};
    double residual = 0.0;  // max |da/dt| over the trailing window
    cplx b_out{};           // beta - i*sqrt(kappa)*a1
};

/// Integrate the mean-field equations of motion with their three-step delay
/// structure (fourth-order explicit stepping, linear history interpolation;
/// the Small topology replaces the delay terms with instantaneous
/// single-point damping). History before t = 0 is identically zero and the
/// drive switches on as a step at t = 0.
/// Preconditions: dt <= min(tau/20, 0.01/kappa) when tau > 0 (else
/// dt <= 0.01/kappa), horizon >= 50/kappa.
/// Throws StepTooLarge (precondition violation, or amplitude growth beyond
/// 1e6*beta) and InvalidHorizon.
Trajectory integrate_mean_field(const SensorParams& p, Topology topo, double epsilon,
                                double dt, double horizon, const MeanInputs& inputs = {});

/// Final amplitudes if the trailing-window residual is within tol, else
/// throws NotConverged carrying the residual.
SteadyState steady_state(const Trajectory& traj, double tol);

struct OracleReport {
    cplx a1_dde{}, a2_dde{};
    cplx a1_fd{}, a2_fd{};       // frequency-domain mean solution at omega = 0
    double max_rel_dev = 0.0;    // over the two amplitudes
    cplx b_out_dde{}, b_out_fd{};
    double b_out_rel_dev = 0.0;
    double residual = 0.0;
    double dt = 0.0;
    double horizon = 0.0;
};

/// Cross-validate the time-domain steady state against the frequency-domain
/// solution under the calibrated convention. tol is the target relative
/// deviation (it sizes the residual threshold; the report carries what was
/// achieved). Propagates SingularSystem / NotConverged / StepTooLarge.
OracleReport oracle_check(const SensorParams& p, Topology topo, double epsilon, double tol);

/// CSV dump, columns: t,re_a1,im_a1,re_a2,im_a2.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

/// Real parts of the two eigenvalues of the effective evolution matrix; the
/// maximum decides linear stability of the operating point.
std::array<double, 2> stability_eigenvalues(const SensorParams& p, Topology topo);

}  // namespace gcs
