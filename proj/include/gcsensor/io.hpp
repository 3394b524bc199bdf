#pragma once

#include <iosfwd>
#include <string>

#include "gcsensor/sweep.hpp"

namespace gcs {

enum class OutputFormat { Csv, Json };

/// 17-significant-digit decimal rendering (round-trips double exactly).
std::string fmt17(double v);

/// Parse a real number, accepting a "pi" suffix for values in units of pi
/// (e.g. "0.84pi"). Throws TypeError.
double parse_real_pi(const std::string& text, const std::string& key);

/// Serialize a sweep table. CSV header:
/// axis,axis_value,rel_signal,noise_shot,noise_gain,noise_dissipative_re,noise_total_re,rel_snr,xi,error
/// Error rows leave the numeric fields empty and set the error code. JSON
/// output is an array of objects with identical keys.
void emit_table(const SweepTable& table, OutputFormat format, std::ostream& os);

/// Serialize a topology-comparison table
/// (axis,axis_value,s_ratio,n_ratio,snr_ratio,error).
void emit_ratio_table(const RatioTable& table, OutputFormat format, std::ostream& os);

/// Write one CSV per figure panel plus a plotting script per figure into
/// out_dir. Deterministic: rerunning produces identical bytes.
void write_figures(const std::string& out_dir);

/// Command-line entry point. Returns the process exit code:
/// 0 success, 2 validation, 3 numerical, 4 I/O.
int run_cli(int argc, const char* const* argv);

}  // namespace gcs
