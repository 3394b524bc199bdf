#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "gcsensor/errors.hpp"
#include "gcsensor/io.hpp"
#include "test_helpers.hpp"

using namespace gcs;
using gcs::test::baseline_with;
using gcs::test::kPi;

namespace fs = std::filesystem;

namespace {

int cli(std::vector<std::string> args) {
    std::vector<const char*> argv{"gcsensor"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) lines.push_back(line);
    return lines;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("gcsensor_test_" + std::to_string(std::rand()) + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

SweepTable tiny_table() {
    SweepSpec spec;
    spec.axis = Axis::Phi;
    spec.lo = 0.0;
    spec.hi = 1.0;
    spec.n_points = 3;
    spec.fixed = baseline_with(0.1, 0.0);
    spec.topology = Topology::Giant;
    spec.convention = TransferConvention::GeneralForm;
    return run_sweep(spec);
}

}  // namespace

TEST_CASE("pi-suffixed reals") {
    CHECK(parse_real_pi("0.84pi", "phi") == doctest::Approx(0.84 * kPi).epsilon(1e-15));
    CHECK(parse_real_pi("pi", "phi") == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(parse_real_pi("-0.5pi", "phi") == doctest::Approx(-0.5 * kPi).epsilon(1e-15));
    CHECK(parse_real_pi("1.25", "phi") == 1.25);
    CHECK_THROWS_AS(parse_real_pi("abc", "phi"), Error);
    CHECK_THROWS_AS(parse_real_pi("1.2piX", "phi"), Error);
}

TEST_CASE("fmt17 round-trips doubles exactly") {
    for (double v : {1.0 / 3.0, 1.04220279009468, -2.5e-17, 6.283185307179586, 0.0}) {
        CHECK(std::strtod(fmt17(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("emit_table CSV schema") {
    const SweepTable t = tiny_table();
    std::ostringstream os;
    emit_table(t, OutputFormat::Csv, os);
    const auto lines = split_lines(os.str());
    REQUIRE(lines.size() == 4);  // header + 3 rows
    CHECK(lines[0] ==
          "axis,axis_value,rel_signal,noise_shot,noise_gain,noise_dissipative_re,"
          "noise_total_re,rel_snr,xi,error");
    CHECK(lines[1].rfind("phi,0,", 0) == 0);

    // round-trip: re-parse every numeric cell bit-exactly
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::istringstream row(lines[i + 1]);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() >= 9);
        const auto& r = *t.rows[i].report;
        CHECK(std::strtod(cells[1].c_str(), nullptr) == t.rows[i].axis_value);
        CHECK(std::strtod(cells[2].c_str(), nullptr) == r.rel_signal_per_photon);
        CHECK(std::strtod(cells[6].c_str(), nullptr) == r.noise.total_measured);
        CHECK(std::strtod(cells[7].c_str(), nullptr) == r.rel_snr_per_photon);
        CHECK(std::strtod(cells[8].c_str(), nullptr) == r.noise.xi);
    }
}

TEST_CASE("emit_table marks singular rows with empty numerics") {
    SweepSpec spec;
    spec.axis = Axis::Delta;
    spec.lo = -1.0;
    spec.hi = 1.0;
    spec.n_points = 3;
    RawParams raw;
    raw.j_coupling = 0.0;
    raw.gamma_gain = 0.0;
    raw.gamma_loss = 0.0;
    spec.fixed = build_params(raw);
    spec.topology = Topology::Small;
    spec.convention = TransferConvention::GeneralForm;
    std::ostringstream os;
    emit_table(run_sweep(spec), OutputFormat::Csv, os);
    const auto lines = split_lines(os.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[2] == "delta,0,,,,,,,,SINGULAR");
}

TEST_CASE("emit_table JSON mirrors the CSV schema") {
    const SweepTable t = tiny_table();
    std::ostringstream os;
    emit_table(t, OutputFormat::Json, os);
    const std::string text = os.str();
    CHECK(text.find("\"axis\": \"phi\"") != std::string::npos);
    CHECK(text.find("\"rel_snr\"") != std::string::npos);
    CHECK(text.find("\"noise_dissipative_re\"") != std::string::npos);
    CHECK(text.find("\"error\": \"\"") != std::string::npos);
}

TEST_CASE("CLI: validation failures exit with code 2") {
    CHECK(cli({"metrics", "--gamma-loss", "-0.1"}) == 2);
    CHECK(cli({"metrics", "--kappa", "0"}) == 2);
    CHECK(cli({"metrics", "--no-such-flag", "1"}) == 2);
    CHECK(cli({"nonsense"}) == 2);
}

TEST_CASE("CLI: numerical failures exit with code 3") {
    // fully decoupled resonant point is singular
    CHECK(cli({"--j", "0", "--gamma-gain", "0", "--gamma-loss", "0", "metrics"}) == 3);
    // unstable operating point never converges
    CHECK(cli({"--phi", "0.84pi", "--tau", "0.1", "oracle", "--tol", "1e-6"}) == 3);
}

TEST_CASE("CLI: sweep writes the pinned schema and respects precedence") {
    TempDir tmp;
    const fs::path out = tmp.path / "sweep.csv";
    const fs::path cfg = tmp.path / "run.cfg";
    {
        std::ofstream os(cfg);
        os << "gamma-loss=0.2\n";
        os << "topology=giant\n";
    }
    // the flag overrides the config file value
    CHECK(cli({"--config", cfg.string(), "--gamma-loss", "0.05", "sweep", "--axis", "phi",
               "--lo", "0", "--hi", "2pi", "--n", "11", "--out", out.string()}) == 0);
    const auto lines = split_lines(slurp(out));
    REQUIRE(lines.size() == 12);
    CHECK(lines[0].rfind("axis,axis_value,", 0) == 0);

    // gamma-loss=0.05: noise at phi=0 differs measurably from the 0.2 case
    std::istringstream row(lines[1]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    const double noise_phi0 = std::strtod(cells[6].c_str(), nullptr);
    const double expected =
        output_noise(baseline_with(0.05, 0.0), Topology::Giant, TransferConvention::GeneralForm)
            .total_measured;
    CHECK(noise_phi0 == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("CLI: config file with unknown keys is rejected") {
    TempDir tmp;
    const fs::path cfg = tmp.path / "bad.cfg";
    {
        std::ofstream os(cfg);
        os << "no-such-key=1\n";
    }
    CHECK(cli({"--config", cfg.string(), "metrics"}) == 2);
}

TEST_CASE("CLI: metrics and chi emit JSON") {
    TempDir tmp;
    const fs::path out = tmp.path / "metrics.json";
    CHECK(cli({"--phi", "0.84pi", "--format", "json", "metrics", "--out", out.string()}) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("\"rel_snr_per_photon\"") != std::string::npos);
    CHECK(text.find("\"homodyne_angle\"") != std::string::npos);

    const fs::path chi_out = tmp.path / "chi.json";
    CHECK(cli({"chi", "--omega", "0.3", "--out", chi_out.string()}) == 0);
    CHECK(slurp(chi_out).find("\"m21\"") != std::string::npos);
}

TEST_CASE("CLI: extremum subcommand") {
    TempDir tmp;
    const fs::path out = tmp.path / "ext.json";
    CHECK(cli({"--topology", "small", "extremum", "--metric", "signal", "--axis",
               "gamma-loss", "--lo", "0", "--hi", "0.2", "--kind", "max", "--out",
               out.string()}) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("\"arg\"") != std::string::npos);
}

TEST_CASE("CLI: oracle subcommand dumps a trajectory on request") {
    TempDir tmp;
    const fs::path traj = tmp.path / "traj.csv";
    CHECK(cli({"--gamma-gain", "0.05", "--gamma-loss", "0.15", "--phi", "0.3pi", "--tau",
               "0.16", "oracle", "--tol", "1e-6", "--out", (tmp.path / "o.json").string(),
               "--traj-out", traj.string()}) == 0);
    const auto lines = split_lines(slurp(traj));
    CHECK(lines[0] == "t,re_a1,im_a1,re_a2,im_a2");
    CHECK(lines.size() > 100);
    const std::string rep = slurp(tmp.path / "o.json");
    CHECK(rep.find("\"max_rel_dev\"") != std::string::npos);
}

TEST_CASE("figures: all panels written, identical on rerun, anchored values hold") {
    TempDir tmp;
    const fs::path dir1 = tmp.path / "fig1";
    const fs::path dir2 = tmp.path / "fig2";
    write_figures(dir1.string());
    write_figures(dir2.string());

    const std::vector<std::string> expected = {
        "fig2a.csv", "fig2b.csv", "fig2c.csv", "fig3a.csv", "fig3b.csv",
        "fig4a.csv", "fig4b.csv", "fig4c.csv", "fig5a.csv", "fig5b.csv",
        "fig6a.csv", "fig6b.csv", "fig6c.csv", "fig2.py",   "fig3.py",
        "fig4.py",   "fig5.py",   "fig6.py"};
    for (const auto& name : expected) {
        CHECK(fs::exists(dir1 / name));
        CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    }

    // fig4b: the gamma = Gamma series minimum sits near 1.04
    {
        const auto lines = split_lines(slurp(dir1 / "fig4b.csv"));
        CHECK(lines[0] == "phi,gamma_0.5G,gamma_1G,gamma_2G,error");
        double best = 1e300;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            std::istringstream row(lines[i]);
            std::string cell;
            std::vector<std::string> cells;
            while (std::getline(row, cell, ',')) cells.push_back(cell);
            best = std::min(best, std::strtod(cells[2].c_str(), nullptr));
        }
        CHECK(std::abs(best - 1.04) <= 0.05);
    }

    // fig3a: signal column peaks near gamma = 0.65 Gamma
    {
        const auto lines = split_lines(slurp(dir1 / "fig3a.csv"));
        CHECK(lines[0] == "gamma_loss,signal,noise,snr,error");
        double best = -1.0;
        double arg = 0.0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            std::istringstream row(lines[i]);
            std::string cell;
            std::vector<std::string> cells;
            while (std::getline(row, cell, ',')) cells.push_back(cell);
            const double v = std::strtod(cells[1].c_str(), nullptr);
            if (v > best) {
                best = v;
                arg = std::strtod(cells[0].c_str(), nullptr);
            }
        }
        CHECK(std::abs(arg - 0.065) <= 0.005);
    }

    // fig6b: the gamma = Gamma ratio column grazes one from below almost everywhere
    {
        const auto lines = split_lines(slurp(dir1 / "fig6b.csv"));
        CHECK(lines[0] == "phi,gamma_0.5G,gamma_1G,gamma_2G,error");
        int above = 0;
        double max_ratio = 0.0;
        for (std::size_t i = 1; i < lines.size(); ++i) {
            std::istringstream row(lines[i]);
            std::string cell;
            std::vector<std::string> cells;
            while (std::getline(row, cell, ',')) cells.push_back(cell);
            const double v = std::strtod(cells[2].c_str(), nullptr);
            max_ratio = std::max(max_ratio, v);
            if (v >= 1.0) ++above;
        }
        CHECK(max_ratio < 1.005);
        CHECK(above > 0);
        CHECK(above < 40);
    }
}
