#include "gcsensor/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "gcsensor/errors.hpp"

namespace gcs {

namespace {

void apply_axis(SensorParams& p, Axis axis, double value) {
    switch (axis) {
        case Axis::Delta: p.delta = value; break;
        case Axis::GammaLoss: p.gamma_loss = value; break;
        case Axis::Phi: p.phi = reduce_phase(value); break;
    }
}

void validate_bracket(Axis axis, double lo, double hi) {
    if (!(lo < hi)) {
        raise(ErrorCode::ValidationError,
              "bracket lo must be < hi, got [" + std::to_string(lo) + ", " +
                  std::to_string(hi) + "]");
    }
    if (axis == Axis::GammaLoss && lo < 0.0) {
        raise(ErrorCode::ValidationError, "gamma_loss sweep must start at >= 0");
    }
}

double metric_value(Metric m, const MetricsReport& r) {
    switch (m) {
        case Metric::Signal: return r.rel_signal_per_photon;
        case Metric::Noise: return r.noise.total_measured;
        case Metric::Snr: return r.rel_snr_per_photon;
        case Metric::GainTerm: return r.noise.reflective_gain;
        case Metric::DissipativeTerm: return r.noise.dissipative.real();
    }
    return 0.0;
}

}  // namespace

const char* to_string(Axis a) {
    switch (a) {
        case Axis::Delta: return "delta";
        case Axis::GammaLoss: return "gamma_loss";
        case Axis::Phi: return "phi";
    }
    return "?";
}

const char* to_string(Metric m) {
    switch (m) {
        case Metric::Signal: return "signal";
        case Metric::Noise: return "noise";
        case Metric::Snr: return "snr";
        case Metric::GainTerm: return "gain_term";
        case Metric::DissipativeTerm: return "dissipative_term";
    }
    return "?";
}

SweepTable run_sweep(const SweepSpec& spec) {
    validate_bracket(spec.axis, spec.lo, spec.hi);
    if (spec.n_points < 2 || spec.n_points > 10'000'000) {
        raise(ErrorCode::ValidationError,
              "n_points must be in [2, 1e7], got " + std::to_string(spec.n_points));
    }

    SweepTable table;
    table.axis = spec.axis;
    table.rows.resize(static_cast<std::size_t>(spec.n_points));

    const double step = (spec.hi - spec.lo) / static_cast<double>(spec.n_points - 1);
    auto eval_row = [&](std::size_t i) {
        SweepRow& row = table.rows[i];
        row.axis_value = spec.lo + static_cast<double>(i) * step;
        SensorParams p = spec.fixed;
        apply_axis(p, spec.axis, row.axis_value);
        try {
            row.report = evaluate_metrics(p, spec.topology, spec.convention);
        } catch (const Error& e) {
            row.error = to_string(e.code());
        }
    };

    const std::size_t n = table.rows.size();
    unsigned hw = std::thread::hardware_concurrency();
    const std::size_t n_threads = std::min<std::size_t>(std::max(hw, 1u), 8);
    if (n_threads <= 1 || n < 256) {
        for (std::size_t i = 0; i < n; ++i) eval_row(i);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i = next.fetch_add(64); i < n; i = next.fetch_add(64)) {
                for (std::size_t j = i; j < std::min(i + 64, n); ++j) eval_row(j);
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return table;
}

namespace {

struct ScanPoint {
    double x, f;
};

// golden-section refinement of a maximum of g on [a, b]
template <class F>
double golden_section_max(F&& g, double& a, double& b, double resolution) {
    static const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = g(x1);
    double f2 = g(x2);
    while (b - a > resolution) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = g(x1);
        }
    }
    return (a + b) / 2.0;
}

ExtremumResult search_bracket(Metric metric, Axis axis, double lo, double hi,
                              double resolution, const SensorParams& p, Topology topo,
                              TransferConvention conv, ExtremumKind kind) {
    const double sign = kind == ExtremumKind::Max ? 1.0 : -1.0;
    auto g = [&](double x) {
        SensorParams q = p;
        apply_axis(q, axis, x);
        return sign * metric_value(metric, evaluate_metrics(q, topo, conv));
    };

    constexpr int kScan = 101;
    std::array<ScanPoint, kScan> scan;
    for (int i = 0; i < kScan; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (kScan - 1);
        scan[static_cast<std::size_t>(i)] = {x, g(x)};
    }

    // plateau-tolerant count of interior extrema of the requested kind:
    // rising->falling transitions of the compressed direction sequence
    std::vector<ScanPoint> peaks;
    int last_dir = 0;
    for (int i = 0; i + 1 < kScan; ++i) {
        const double d = scan[static_cast<std::size_t>(i + 1)].f -
                         scan[static_cast<std::size_t>(i)].f;
        const int dir = d > 0.0 ? 1 : (d < 0.0 ? -1 : 0);
        if (dir == 0) continue;
        if (last_dir == 1 && dir == -1) peaks.push_back(scan[static_cast<std::size_t>(i)]);
        last_dir = dir;
    }
    if (peaks.size() > 1) {
        std::ostringstream msg;
        msg << to_string(metric) << " is not unimodal on [" << lo << ", " << hi
            << "]: coarse scan found " << peaks.size() << " local "
            << (kind == ExtremumKind::Max ? "maxima" : "minima") << " near";
        for (const auto& pk : peaks) msg << " (x=" << pk.x << ", f=" << sign * pk.f << ")";
        raise(ErrorCode::NotUnimodal, msg.str());
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < scan.size(); ++i) {
        if (scan[i].f > scan[best].f) best = i;
    }
    double a = scan[best > 0 ? best - 1 : 0].x;
    double b = scan[std::min<std::size_t>(best + 1, kScan - 1)].x;
    const double arg = golden_section_max(g, a, b, resolution);

    ExtremumResult res;
    res.arg = arg;
    res.value = sign * g(arg);
    res.kind = kind;
    res.bracket_lo = lo;
    res.bracket_hi = hi;
    res.refined_to = b - a;
    return res;
}

}  // namespace

ExtremumResult find_extremum(Metric metric, Axis axis, double lo, double hi,
                             double resolution, const SensorParams& p, Topology topo,
                             TransferConvention conv, ExtremumKind kind) {
    validate_bracket(axis, lo, hi);
    if (!(resolution > 0.0)) {
        raise(ErrorCode::ValidationError, "resolution must be > 0");
    }

    // The Heaviside cutoff makes small-topology metrics kinked at
    // gamma_loss = gamma_gain; never bracket across it.
    if (topo == Topology::Small && axis == Axis::GammaLoss && lo < p.gamma_gain &&
        p.gamma_gain < hi) {
        ExtremumResult left =
            search_bracket(metric, axis, lo, p.gamma_gain, resolution, p, topo, conv, kind);
        ExtremumResult right =
            search_bracket(metric, axis, p.gamma_gain, hi, resolution, p, topo, conv, kind);
        const bool left_wins = kind == ExtremumKind::Max ? left.value >= right.value
                                                         : left.value <= right.value;
        ExtremumResult res = left_wins ? left : right;
        res.bracket_lo = lo;
        res.bracket_hi = hi;
        return res;
    }
    return search_bracket(metric, axis, lo, hi, resolution, p, topo, conv, kind);
}

RatioTable compare_topologies(const SweepSpec& spec) {
    if (spec.axis != Axis::Phi) {
        raise(ErrorCode::ValidationError, "topology comparison sweeps the phi axis");
    }
    validate_bracket(spec.axis, spec.lo, spec.hi);
    if (spec.n_points < 2 || spec.n_points > 10'000'000) {
        raise(ErrorCode::ValidationError, "n_points must be in [2, 1e7]");
    }

    // small-cavity metrics carry no phase dependence; evaluate once
    const MetricsReport small = evaluate_metrics(spec.fixed, Topology::Small, spec.convention);
    const double s_small = small.rel_signal_per_photon;
    const double n_small = small.noise.total_measured;
    const double snr_small = small.rel_snr_per_photon;

    RatioTable table;
    table.rows.resize(static_cast<std::size_t>(spec.n_points));
    const double step = (spec.hi - spec.lo) / static_cast<double>(spec.n_points - 1);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        RatioRow& row = table.rows[i];
        row.axis_value = spec.lo + static_cast<double>(i) * step;
        SensorParams p = spec.fixed;
        apply_axis(p, Axis::Phi, row.axis_value);
        try {
            const MetricsReport giant = evaluate_metrics(p, Topology::Giant, spec.convention);
            if (s_small == 0.0 || n_small == 0.0 || snr_small == 0.0) {
                row.error = to_string(ErrorCode::DivisionByZeroRow);
                row.n_ratio = n_small != 0.0 ? giant.noise.total_measured / n_small : 0.0;
                continue;
            }
            row.s_ratio = giant.rel_signal_per_photon / s_small;
            row.n_ratio = giant.noise.total_measured / n_small;
            row.snr_ratio = giant.rel_snr_per_photon / snr_small;
        } catch (const Error& e) {
            row.error = to_string(e.code());
        }
    }
    return table;
}

}  // namespace gcs
