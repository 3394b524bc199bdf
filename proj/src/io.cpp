#include "gcsensor/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include "gcsensor/dde.hpp"
#include "gcsensor/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace gcs {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_real_pi(const std::string& text, const std::string& key) {
    std::string s = text;
    s.erase(0, s.find_first_not_of(" \t"));
    s.erase(s.find_last_not_of(" \t") + 1);
    double factor = 1.0;
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        factor = kPi;
        s = s.substr(0, s.size() - 2);
        if (s.empty() || s == "+") s = "1";
        if (s == "-") s = "-1";
    }
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        raise(ErrorCode::TypeError, "cannot parse '" + text + "' for " + key);
    }
    if (pos != s.size()) {
        raise(ErrorCode::TypeError, "trailing characters in '" + text + "' for " + key);
    }
    return value * factor;
}

namespace {

const char* kTableHeader =
    "axis,axis_value,rel_signal,noise_shot,noise_gain,noise_dissipative_re,"
    "noise_total_re,rel_snr,xi,error";

void emit_table_csv(const SweepTable& table, std::ostream& os) {
    os << kTableHeader << '\n';
    const char* axis = to_string(table.axis);
    for (const auto& row : table.rows) {
        os << axis << ',' << fmt17(row.axis_value) << ',';
        if (row.report) {
            const MetricsReport& r = *row.report;
            os << fmt17(r.rel_signal_per_photon) << ',' << fmt17(r.noise.shot) << ','
               << fmt17(r.noise.reflective_gain) << ',' << fmt17(r.noise.dissipative.real())
               << ',' << fmt17(r.noise.total_measured) << ',' << fmt17(r.rel_snr_per_photon)
               << ',' << fmt17(r.noise.xi) << ',';
        } else {
            os << ",,,,,,,";
        }
        os << row.error << '\n';
    }
}

json row_to_json(const char* axis, const SweepRow& row) {
    json j;
    j["axis"] = axis;
    j["axis_value"] = row.axis_value;
    if (row.report) {
        const MetricsReport& r = *row.report;
        j["rel_signal"] = r.rel_signal_per_photon;
        j["noise_shot"] = r.noise.shot;
        j["noise_gain"] = r.noise.reflective_gain;
        j["noise_dissipative_re"] = r.noise.dissipative.real();
        j["noise_total_re"] = r.noise.total_measured;
        j["rel_snr"] = r.rel_snr_per_photon;
        j["xi"] = r.noise.xi;
    } else {
        for (const char* k : {"rel_signal", "noise_shot", "noise_gain",
                              "noise_dissipative_re", "noise_total_re", "rel_snr", "xi"}) {
            j[k] = nullptr;
        }
    }
    j["error"] = row.error;
    return j;
}

}  // namespace

void emit_table(const SweepTable& table, OutputFormat format, std::ostream& os) {
    if (table.rows.empty()) {
        raise(ErrorCode::ValidationError, "refusing to serialize an empty table");
    }
    if (format == OutputFormat::Csv) {
        emit_table_csv(table, os);
        return;
    }
    json arr = json::array();
    for (const auto& row : table.rows) arr.push_back(row_to_json(to_string(table.axis), row));
    os << arr.dump(2) << '\n';
}

void emit_ratio_table(const RatioTable& table, OutputFormat format, std::ostream& os) {
    if (table.rows.empty()) {
        raise(ErrorCode::ValidationError, "refusing to serialize an empty table");
    }
    if (format == OutputFormat::Csv) {
        os << "axis,axis_value,s_ratio,n_ratio,snr_ratio,error\n";
        for (const auto& row : table.rows) {
            os << "phi," << fmt17(row.axis_value) << ',';
            if (row.error.empty()) {
                os << fmt17(row.s_ratio) << ',' << fmt17(row.n_ratio) << ','
                   << fmt17(row.snr_ratio) << ',';
            } else {
                os << ",,,";
            }
            os << row.error << '\n';
        }
        return;
    }
    json arr = json::array();
    for (const auto& row : table.rows) {
        json j;
        j["axis"] = "phi";
        j["axis_value"] = row.axis_value;
        if (row.error.empty()) {
            j["s_ratio"] = row.s_ratio;
            j["n_ratio"] = row.n_ratio;
            j["snr_ratio"] = row.snr_ratio;
        } else {
            j["s_ratio"] = nullptr;
            j["n_ratio"] = nullptr;
            j["snr_ratio"] = nullptr;
        }
        j["error"] = row.error;
        arr.push_back(j);
    }
    os << arr.dump(2) << '\n';
}

// --- figure reproduction -----------------------------------------------------

namespace {

struct Series {
    std::string name;
    std::vector<std::optional<double>> values;
    std::vector<std::string> errors;  // parallel to values
};

void write_wide_csv(const fs::path& path, const std::string& axis_name,
                    const std::vector<double>& axis, const std::vector<Series>& series) {
    std::ofstream os(path);
    if (!os) raise(ErrorCode::IoError, "cannot open " + path.string());
    os << axis_name;
    for (const auto& s : series) os << ',' << s.name;
    os << ",error\n";
    for (std::size_t i = 0; i < axis.size(); ++i) {
        os << fmt17(axis[i]);
        std::string err;
        for (const auto& s : series) {
            os << ',';
            if (s.values[i]) {
                os << fmt17(*s.values[i]);
            } else {
                if (!err.empty()) err += ';';
                err += s.name + "=" + s.errors[i];
            }
        }
        os << ',' << err << '\n';
    }
    if (!os) raise(ErrorCode::IoError, "write failed for " + path.string());
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) raise(ErrorCode::IoError, "cannot open " + path.string());
    os << text;
    if (!os) raise(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<double> axis_values(const SweepTable& t) {
    std::vector<double> v;
    v.reserve(t.rows.size());
    for (const auto& r : t.rows) v.push_back(r.axis_value);
    return v;
}

Series extract(const SweepTable& t, Metric m, const std::string& name) {
    Series s;
    s.name = name;
    for (const auto& row : t.rows) {
        if (row.report) {
            const MetricsReport& r = *row.report;
            double v = 0.0;
            switch (m) {
                case Metric::Signal: v = r.rel_signal_per_photon; break;
                case Metric::Noise: v = r.noise.total_measured; break;
                case Metric::Snr: v = r.rel_snr_per_photon; break;
                case Metric::GainTerm: v = r.noise.reflective_gain; break;
                case Metric::DissipativeTerm: v = r.noise.dissipative.real(); break;
            }
            s.values.emplace_back(v);
            s.errors.emplace_back();
        } else {
            s.values.emplace_back(std::nullopt);
            s.errors.push_back(row.error);
        }
    }
    return s;
}

std::string plot_script(const std::string& figure, const std::string& axis_label,
                        const std::vector<std::pair<std::string, std::string>>& panels,
                        bool log_y) {
    std::ostringstream os;
    os << "#!/usr/bin/env python3\n"
       << "\"\"\"Plot " << figure << " panels from the CSVs in this directory.\"\"\"\n"
       << "import csv\n\nimport matplotlib\n\nmatplotlib.use(\"Agg\")\n"
       << "import matplotlib.pyplot as plt\n\n\n"
       << "def load(name):\n"
       << "    with open(name, newline=\"\") as fh:\n"
       << "        rows = list(csv.reader(fh))\n"
       << "    head, data = rows[0], rows[1:]\n"
       << "    cols = {h: [] for h in head}\n"
       << "    for row in data:\n"
       << "        for h, cell in zip(head, row):\n"
       << "            cols[h].append(float(cell) if h != \"error\" and cell else None)\n"
       << "    return head, cols\n\n\n"
       << "panels = " << [&] {
              std::ostringstream p;
              p << "[";
              for (std::size_t i = 0; i < panels.size(); ++i) {
                  p << (i ? ", " : "") << "(\"" << panels[i].first << "\", \""
                    << panels[i].second << "\")";
              }
              p << "]";
              return p.str();
          }()
       << "\n"
       << "fig, axes = plt.subplots(1, len(panels), figsize=(5.2 * len(panels), 4.0))\n"
       << "axes = [axes] if len(panels) == 1 else list(axes)\n"
       << "for ax, (csv_name, ylabel) in zip(axes, panels):\n"
       << "    head, cols = load(csv_name)\n"
       << "    x = cols[head[0]]\n"
       << "    for name in head[1:-1]:\n"
       << "        ax.plot(x, cols[name], label=name)\n"
       << "    ax.set_xlabel(\"" << axis_label << "\")\n"
       << "    ax.set_ylabel(ylabel)\n";
    if (log_y) os << "    ax.set_yscale(\"log\")\n";
    os << "    ax.legend(fontsize=8)\n"
       << "fig.tight_layout()\n"
       << "fig.savefig(\"" << figure << ".png\", dpi=150)\n"
       << "print(\"wrote " << figure << ".png\")\n";
    return os.str();
}

}  // namespace

void write_figures(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) raise(ErrorCode::IoError, "cannot create " + out_dir + ": " + ec.message());
    const fs::path dir(out_dir);

    const TransferConvention conv = default_convention();
    const SensorParams base = build_params(RawParams{});  // delta=delta12=0, J=Gamma=0.1
    const double gamma_gain = base.gamma_gain;
    constexpr int kN = 2001;

    auto family_sweep = [&](Topology topo, Axis axis, double lo, double hi,
                            const std::vector<double>& gamma_factors) {
        std::vector<std::pair<std::string, SweepTable>> out;
        for (double f : gamma_factors) {
            SweepSpec spec;
            spec.axis = axis;
            spec.lo = lo;
            spec.hi = hi;
            spec.n_points = kN;
            spec.fixed = base;
            spec.fixed.gamma_loss = f * gamma_gain;
            spec.topology = topo;
            spec.convention = conv;
            std::ostringstream name;
            name << "gamma_" << f << "G";
            out.emplace_back(name.str(), run_sweep(spec));
        }
        return out;
    };

    // small topology vs detuning, one curve per loss rate
    {
        auto fams = family_sweep(Topology::Small, Axis::Delta, -2.0, 2.0,
                                 {0.25, 0.5, 1.0, 2.0});
        const auto axis = axis_values(fams.front().second);
        for (auto [panel, metric] : {std::pair{"fig2a", Metric::Signal},
                                     {"fig2b", Metric::Noise},
                                     {"fig2c", Metric::Snr}}) {
            std::vector<Series> series;
            for (auto& [name, table] : fams) series.push_back(extract(table, metric, name));
            write_wide_csv(dir / (std::string(panel) + ".csv"), "delta", axis, series);
        }
        write_text(dir / "fig2.py",
                   plot_script("fig2", "delta / kappa",
                               {{"fig2a.csv", "relative signal per photon"},
                                {"fig2b.csv", "relative noise"},
                                {"fig2c.csv", "relative SNR per photon"}},
                               false));
    }

    // small topology vs loss rate at resonance
    {
        SweepSpec spec;
        spec.axis = Axis::GammaLoss;
        spec.lo = 0.0;
        spec.hi = 2.0 * gamma_gain;
        spec.n_points = kN;
        spec.fixed = base;
        spec.topology = Topology::Small;
        spec.convention = conv;
        const SweepTable t = run_sweep(spec);
        const auto axis = axis_values(t);
        write_wide_csv(dir / "fig3a.csv", "gamma_loss", axis,
                       {extract(t, Metric::Signal, "signal"),
                        extract(t, Metric::Noise, "noise"),
                        extract(t, Metric::Snr, "snr")});
        write_wide_csv(dir / "fig3b.csv", "gamma_loss", axis,
                       {extract(t, Metric::GainTerm, "reflective_gain"),
                        extract(t, Metric::DissipativeTerm, "dissipative_loss")});
        write_text(dir / "fig3.py",
                   plot_script("fig3", "gamma_loss / kappa",
                               {{"fig3a.csv", "relative signal / noise / SNR"},
                                {"fig3b.csv", "noise terms"}},
                               false));
    }

    // giant topology vs delay phase at resonance
    {
        auto fams =
            family_sweep(Topology::Giant, Axis::Phi, 0.0, 2.0 * kPi, {0.5, 1.0, 2.0});
        const auto axis = axis_values(fams.front().second);
        for (auto [panel, metric] : {std::pair{"fig4a", Metric::Signal},
                                     {"fig4b", Metric::Noise},
                                     {"fig4c", Metric::Snr}}) {
            std::vector<Series> series;
            for (auto& [name, table] : fams) series.push_back(extract(table, metric, name));
            write_wide_csv(dir / (std::string(panel) + ".csv"), "phi", axis, series);
        }
        for (auto [panel, metric] : {std::pair{"fig5a", Metric::GainTerm},
                                     {"fig5b", Metric::DissipativeTerm}}) {
            std::vector<Series> series;
            for (auto& [name, table] : fams) series.push_back(extract(table, metric, name));
            write_wide_csv(dir / (std::string(panel) + ".csv"), "phi", axis, series);
        }
        write_text(dir / "fig4.py",
                   plot_script("fig4", "phi",
                               {{"fig4a.csv", "relative signal per photon"},
                                {"fig4b.csv", "relative noise"},
                                {"fig4c.csv", "relative SNR per photon"}},
                               true));
        write_text(dir / "fig5.py",
                   plot_script("fig5", "phi",
                               {{"fig5a.csv", "reflective gain"},
                                {"fig5b.csv", "dissipative loss (Re)"}},
                               false));
    }

    // giant/small ratios vs delay phase
    {
        std::vector<std::pair<std::string, RatioTable>> fams;
        for (double f : {0.5, 1.0, 2.0}) {
            SweepSpec spec;
            spec.axis = Axis::Phi;
            spec.lo = 0.0;
            spec.hi = 2.0 * kPi;
            spec.n_points = kN;
            spec.fixed = base;
            spec.fixed.gamma_loss = f * gamma_gain;
            spec.topology = Topology::Giant;
            spec.convention = conv;
            std::ostringstream name;
            name << "gamma_" << f << "G";
            fams.emplace_back(name.str(), compare_topologies(spec));
        }
        std::vector<double> axis;
        for (const auto& r : fams.front().second.rows) axis.push_back(r.axis_value);
        for (auto [panel, which] :
             {std::pair{"fig6a", 0}, {"fig6b", 1}, {"fig6c", 2}}) {
            std::vector<Series> series;
            for (auto& [name, table] : fams) {
                Series s;
                s.name = name;
                for (const auto& row : table.rows) {
                    if (row.error.empty()) {
                        const double v = which == 0   ? row.s_ratio
                                         : which == 1 ? row.n_ratio
                                                      : row.snr_ratio;
                        s.values.emplace_back(v);
                        s.errors.emplace_back();
                    } else {
                        s.values.emplace_back(std::nullopt);
                        s.errors.push_back(row.error);
                    }
                }
                series.push_back(std::move(s));
            }
            write_wide_csv(dir / (std::string(panel) + ".csv"), "phi", axis, series);
        }
        write_text(dir / "fig6.py",
                   plot_script("fig6", "phi",
                               {{"fig6a.csv", "signal ratio"},
                                {"fig6b.csv", "noise ratio"},
                                {"fig6c.csv", "SNR ratio"}},
                               true));
    }
}

// --- command line ------------------------------------------------------------

namespace {

struct CliState {
    // raw physics inputs (strings where a pi suffix is allowed)
    RawParams raw;
    std::string phi_text = "0";
    double v11 = 1.0, v12 = 1.0, v22 = 1.0;
    std::string topology = "giant";
    std::string convention = "calibrated";
    std::string out;
    std::string format = "csv";

    // sweep / extremum / compare
    std::string axis = "phi";
    std::string lo_text = "0";
    std::string hi_text = "2pi";
    int n_points = 2001;
    std::string metric = "noise";
    std::string kind = "min";
    double resolution = 1e-4;

    // chi / oracle
    double omega = 0.0;
    double epsilon = 0.0;
    double tol = 1e-6;
    std::string traj_out;
};

SensorParams make_params(CliState& st) {
    st.raw.phi = parse_real_pi(st.phi_text, "phi");
    st.raw.v_matrix = Mat2{st.v11, st.v12, st.v12, st.v22};
    return build_params(st.raw);
}

Topology parse_topology(const std::string& s) {
    if (s == "giant") return Topology::Giant;
    if (s == "small") return Topology::Small;
    raise(ErrorCode::ValidationError, "topology must be giant or small, got '" + s + "'");
}

TransferConvention parse_convention(const std::string& s) {
    if (s == "general") return TransferConvention::GeneralForm;
    if (s == "explicit") return TransferConvention::ExplicitForm;
    if (s == "calibrated") return default_convention();
    raise(ErrorCode::ValidationError,
          "convention must be general, explicit or calibrated, got '" + s + "'");
}

Axis parse_axis(const std::string& s) {
    if (s == "delta") return Axis::Delta;
    if (s == "gamma-loss" || s == "gamma_loss") return Axis::GammaLoss;
    if (s == "phi") return Axis::Phi;
    raise(ErrorCode::ValidationError, "axis must be delta, gamma-loss or phi, got '" + s + "'");
}

Metric parse_metric(const std::string& s) {
    if (s == "signal") return Metric::Signal;
    if (s == "noise") return Metric::Noise;
    if (s == "snr") return Metric::Snr;
    if (s == "gain-term" || s == "gain_term") return Metric::GainTerm;
    if (s == "dissipative-term" || s == "dissipative_term") return Metric::DissipativeTerm;
    raise(ErrorCode::ValidationError, "unknown metric '" + s + "'");
}

OutputFormat parse_format(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    raise(ErrorCode::ValidationError, "format must be csv or json, got '" + s + "'");
}

std::string default_out_dir() {
    if (const char* env = std::getenv("GCSENSOR_OUTPUT_DIR")) return env;
    return ".";
}

// stream to --out when set (resolved against the default output directory),
// else stdout
class OutStream {
public:
    explicit OutStream(const std::string& out) {
        if (out.empty()) return;
        fs::path p(out);
        if (p.is_relative()) p = fs::path(default_out_dir()) / p;
        file_.open(p);
        if (!file_) raise(ErrorCode::IoError, "cannot open " + p.string());
        path_ = p.string();
    }
    std::ostream& get() { return file_.is_open() ? file_ : std::cout; }
    void finish() {
        if (file_.is_open() && !file_) raise(ErrorCode::IoError, "write failed: " + path_);
    }

private:
    std::ofstream file_;
    std::string path_;
};

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

json metrics_json(const MetricsReport& r) {
    json j;
    j["chi"] = {{"m11", cplx_json(r.chi.m11)},
                {"m12", cplx_json(r.chi.m12)},
                {"m21", cplx_json(r.chi.m21)},
                {"m22", cplx_json(r.chi.m22)}};
    j["lambda_reduced"] = cplx_json(r.lambda_reduced);
    j["homodyne_angle"] = r.homodyne_angle;
    j["rel_signal_per_photon"] = r.rel_signal_per_photon;
    j["noise"] = {{"shot", r.noise.shot},
                  {"reflective_gain", r.noise.reflective_gain},
                  {"dissipative", cplx_json(r.noise.dissipative)},
                  {"total_complex", cplx_json(r.noise.total_complex)},
                  {"total_measured", r.noise.total_measured},
                  {"xi", r.noise.xi}};
    j["rel_snr_per_photon"] = r.rel_snr_per_photon;
    j["n_tot_reduced"] = r.n_tot_reduced;
    return j;
}

void add_param_options(CLI::App& app, CliState& st) {
    app.add_option("--delta", st.raw.delta, "drive detuning (units of kappa)");
    app.add_option("--delta12", st.raw.delta12, "cavity-cavity detuning");
    app.add_option("--j", st.raw.j_coupling, "direct cavity-cavity coupling");
    app.add_option("--gamma-gain", st.raw.gamma_gain, "gain-reservoir rate");
    app.add_option("--gamma-loss", st.raw.gamma_loss, "dissipative-reservoir rate");
    app.add_option("--kappa", st.raw.kappa, "readout-waveguide coupling");
    app.add_option("--phi", st.phi_text, "delay phase; accepts a pi suffix, e.g. 0.84pi");
    app.add_option("--tau", st.raw.tau, "neighbor-point delay (units of 1/kappa)");
    app.add_option("--beta", st.raw.beta, "classical drive amplitude");
    app.add_option("--v11", st.v11, "perturbation coupling V11");
    app.add_option("--v12", st.v12, "perturbation coupling V12 (= V21)");
    app.add_option("--v22", st.v22, "perturbation coupling V22");
    app.add_option("--topology", st.topology, "giant | small")
        ->check(CLI::IsMember({"giant", "small"}));
    app.add_option("--convention", st.convention, "general | explicit | calibrated")
        ->check(CLI::IsMember({"general", "explicit", "calibrated"}));
    app.add_option("--out", st.out, "output path (default: stdout)");
    app.add_option("--format", st.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CliState st;
    CLI::App app{"Two-cavity quantum sensor toolkit: state-transfer matrices, homodyne "
                 "metrics, delay-equation cross-checks and figure sweeps"};
    app.require_subcommand(1);
    app.fallthrough(true);  // shared physics flags are accepted after the subcommand
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "flat key=value config file; flags take precedence");
    add_param_options(app, st);

    CLI::App* cmd_metrics =
        app.add_subcommand("metrics", "steady-state metrics at one operating point");
    CLI::App* cmd_chi = app.add_subcommand("chi", "state-transfer matrix");
    cmd_chi->add_option("--omega", st.omega, "probe frequency (units of kappa)");
    cmd_chi->add_option("--epsilon", st.epsilon, "perturbation strength");
    CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep one axis and tabulate metrics");
    cmd_sweep->add_option("--axis", st.axis, "delta | gamma-loss | phi")
        ->check(CLI::IsMember({"delta", "gamma-loss", "gamma_loss", "phi"}));
    cmd_sweep->add_option("--lo", st.lo_text, "lower bound (pi suffix allowed)");
    cmd_sweep->add_option("--hi", st.hi_text, "upper bound (pi suffix allowed)");
    cmd_sweep->add_option("--n", st.n_points, "grid points (>= 2)");
    CLI::App* cmd_extremum =
        app.add_subcommand("extremum", "locate a metric extremum by golden-section search");
    cmd_extremum->add_option("--metric", st.metric,
                             "signal | noise | snr | gain-term | dissipative-term");
    cmd_extremum->add_option("--axis", st.axis, "delta | gamma-loss | phi");
    cmd_extremum->add_option("--lo", st.lo_text, "bracket lower bound");
    cmd_extremum->add_option("--hi", st.hi_text, "bracket upper bound");
    cmd_extremum->add_option("--kind", st.kind, "max | min")
        ->check(CLI::IsMember({"max", "min"}));
    cmd_extremum->add_option("--resolution", st.resolution, "bracket width target");
    CLI::App* cmd_compare =
        app.add_subcommand("compare", "giant/small metric ratios over the phi axis");
    cmd_compare->add_option("--lo", st.lo_text, "lower bound (pi suffix allowed)");
    cmd_compare->add_option("--hi", st.hi_text, "upper bound (pi suffix allowed)");
    cmd_compare->add_option("--n", st.n_points, "grid points");
    CLI::App* cmd_oracle = app.add_subcommand(
        "oracle", "time-domain steady state vs frequency-domain solution");
    cmd_oracle->add_option("--epsilon", st.epsilon, "perturbation strength");
    cmd_oracle->add_option("--tol", st.tol, "target relative deviation");
    cmd_oracle->add_option("--traj-out", st.traj_out, "also dump the trajectory CSV here");
    CLI::App* cmd_figures =
        app.add_subcommand("figures", "write every figure CSV and plot script");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const SensorParams params = make_params(st);
        const Topology topo = parse_topology(st.topology);
        const OutputFormat format = parse_format(st.format);

        if (cmd_metrics->parsed()) {
            const MetricsReport r = evaluate_metrics(params, topo, parse_convention(st.convention));
            OutStream os(st.out);
            if (format == OutputFormat::Json) {
                os.get() << metrics_json(r).dump(2) << '\n';
            } else {
                SweepTable t;
                t.axis = Axis::Phi;
                t.rows.push_back({params.phi, r, ""});
                emit_table(t, OutputFormat::Csv, os.get());
            }
            os.finish();
        } else if (cmd_chi->parsed()) {
            const Mat2 chi = transfer_matrix(params, topo, parse_convention(st.convention),
                                             st.omega, st.epsilon);
            json j;
            j["omega"] = st.omega;
            j["epsilon"] = st.epsilon;
            j["chi"] = {{"m11", cplx_json(chi.m11)},
                        {"m12", cplx_json(chi.m12)},
                        {"m21", cplx_json(chi.m21)},
                        {"m22", cplx_json(chi.m22)}};
            OutStream os(st.out);
            os.get() << j.dump(2) << '\n';
            os.finish();
        } else if (cmd_sweep->parsed()) {
            SweepSpec spec;
            spec.axis = parse_axis(st.axis);
            spec.lo = parse_real_pi(st.lo_text, "lo");
            spec.hi = parse_real_pi(st.hi_text, "hi");
            spec.n_points = st.n_points;
            spec.fixed = params;
            spec.topology = topo;
            spec.convention = parse_convention(st.convention);
            const SweepTable table = run_sweep(spec);
            OutStream os(st.out);
            emit_table(table, format, os.get());
            os.finish();
        } else if (cmd_extremum->parsed()) {
            const ExtremumResult r = find_extremum(
                parse_metric(st.metric), parse_axis(st.axis), parse_real_pi(st.lo_text, "lo"),
                parse_real_pi(st.hi_text, "hi"), st.resolution, params, topo,
                parse_convention(st.convention),
                st.kind == "max" ? ExtremumKind::Max : ExtremumKind::Min);
            json j;
            j["metric"] = st.metric;
            j["axis"] = st.axis;
            j["kind"] = st.kind;
            j["arg"] = r.arg;
            j["value"] = r.value;
            j["bracket"] = json::array({r.bracket_lo, r.bracket_hi});
            j["refined_to"] = r.refined_to;
            OutStream os(st.out);
            os.get() << j.dump(2) << '\n';
            os.finish();
        } else if (cmd_compare->parsed()) {
            SweepSpec spec;
            spec.axis = Axis::Phi;
            spec.lo = parse_real_pi(st.lo_text, "lo");
            spec.hi = parse_real_pi(st.hi_text, "hi");
            spec.n_points = st.n_points;
            spec.fixed = params;
            spec.topology = Topology::Giant;
            spec.convention = parse_convention(st.convention);
            const RatioTable table = compare_topologies(spec);
            OutStream os(st.out);
            emit_ratio_table(table, format, os.get());
            os.finish();
        } else if (cmd_oracle->parsed()) {
            const OracleReport r = oracle_check(params, topo, st.epsilon, st.tol);
            json j;
            j["a1_dde"] = cplx_json(r.a1_dde);
            j["a2_dde"] = cplx_json(r.a2_dde);
            j["a1_freq"] = cplx_json(r.a1_fd);
            j["a2_freq"] = cplx_json(r.a2_fd);
            j["max_rel_dev"] = r.max_rel_dev;
            j["b_out_dde"] = cplx_json(r.b_out_dde);
            j["b_out_freq"] = cplx_json(r.b_out_fd);
            j["b_out_rel_dev"] = r.b_out_rel_dev;
            j["residual"] = r.residual;
            j["dt"] = r.dt;
            j["horizon"] = r.horizon;
            OutStream os(st.out);
            os.get() << j.dump(2) << '\n';
            os.finish();
            if (!st.traj_out.empty()) {
                const Trajectory traj = integrate_mean_field(
                    params, topo, st.epsilon, r.dt,
                    std::min(r.horizon, 200.0 / params.kappa));
                OutStream tos(st.traj_out);
                write_trajectory_csv(traj, tos.get());
                tos.finish();
            }
        } else if (cmd_figures->parsed()) {
            const std::string dir =
                st.out.empty() ? (fs::path(default_out_dir()) / "figures").string() : st.out;
            write_figures(dir);
            std::cout << "wrote figure CSVs and plot scripts to " << dir << '\n';
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace gcs
