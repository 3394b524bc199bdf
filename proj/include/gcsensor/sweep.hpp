#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcsensor/metrics.hpp"

namespace gcs {

enum class Axis { Delta, GammaLoss, Phi };
enum class Metric { Signal, Noise, Snr, GainTerm, DissipativeTerm };

const char* to_string(Axis a);
const char* to_string(Metric m);

/// Rectangular sweep over one axis; the axis value overrides the matching
/// field of `fixed` at every grid point.
struct SweepSpec {
    Axis axis = Axis::Phi;
    double lo = 0.0;
    double hi = 1.0;
    int n_points = 2001;
    SensorParams fixed;
    Topology topology = Topology::Giant;
    TransferConvention convention = TransferConvention::GeneralForm;
    std::vector<Metric> metrics;  // empty = all
};

/// One grid point: either a full report or an error marker, never NaN.
struct SweepRow {
    double axis_value = 0.0;
    std::optional<MetricsReport> report;
    std::string error;  // empty when report holds
};

struct SweepTable {
    Axis axis = Axis::Phi;
    std::vector<SweepRow> rows;
};

/// Evaluate the grid with a worker pool; rows where the system is singular
/// carry the error marker. Deterministic and independent of chunking.
SweepTable run_sweep(const SweepSpec& spec);

enum class ExtremumKind { Max, Min };

struct ExtremumResult {
    double arg = 0.0;
    double value = 0.0;
    ExtremumKind kind = ExtremumKind::Max;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double refined_to = 0.0;  // final bracket width
};

/// Coarse 101-point pre-scan (errors with NotUnimodal, reporting the multiple
/// local extrema, if the metric is not unimodal on the bracket), then
/// golden-section refinement to `resolution`. For the Small topology a
/// gamma-axis bracket spanning gamma_gain is split at the crossing and the
/// two sides are searched separately.
ExtremumResult find_extremum(Metric metric, Axis axis, double lo, double hi,
                             double resolution, const SensorParams& p, Topology topo,
                             TransferConvention conv, ExtremumKind kind);

/// Giant/small ratio of signal, measured noise and SNR per phi grid point.
struct RatioRow {
    double axis_value = 0.0;
    double s_ratio = 0.0;
    double n_ratio = 0.0;
    double snr_ratio = 0.0;
    std::string error;
};

struct RatioTable {
    std::vector<RatioRow> rows;
};

/// The Small metrics are phi-independent and are evaluated once. Rows where
/// a small-topology metric vanishes carry a DivisionByZeroRow marker.
/// The spec axis must be Phi.
RatioTable compare_topologies(const SweepSpec& spec);

}  // namespace gcs
