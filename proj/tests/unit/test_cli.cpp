#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ati/cli.hpp"
#include "ati/units.hpp"

using namespace ati;
using namespace ati::cli;
namespace fs = std::filesystem;

namespace {

const std::string kSource = ATI_SOURCE_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ati_test_cli_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::vector<std::string>> rows(const std::string& csv) {
    std::vector<std::vector<std::string>> out;
    std::stringstream ss(csv);
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        out.push_back(cells);
    }
    return out;
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("parse_config reads every key") {
    const RunConfig c = parse_config(R"J({
        "photon_energy_ev": 2.5, "peak_field_v_per_cm": 1e12, "polarization": "elliptic(0.25)",
        "z_a": 3, "binding_energy_ev": 100, "theta_points": 12, "phi_points": 4,
        "n_range": [5, 9], "mode": "off", "output_path": "x", "formula": "relativistic", "workers": 2})J");
    CHECK(*c.photon_energy_ev == 2.5);
    CHECK(*c.peak_field_v_per_cm == 1e12);
    CHECK_FALSE(c.intensity_xi);
    CHECK(c.polarization == "elliptic");
    CHECK(c.zeta == 0.25);
    CHECK(c.z_a == 3);
    CHECK(*c.binding_energy_ev == 100);
    CHECK(c.theta_points == 12);
    CHECK(c.phi_points == 4);
    CHECK(c.n_range->first == 5);
    CHECK(c.n_range->second == 9);
    CHECK(c.mode == Rescattering::off);
    CHECK(c.output_path == "x");
    CHECK(c.workers == 2);
    CHECK_NOTHROW(c.validate());
    CHECK_FALSE(c.atom().hydrogenic);
    CHECK(c.xi() == doctest::Approx(units::field_to_xi(1e12, units::ev_to_internal(2.5))));
}

TEST_CASE("parse_config diagnostics carry line and field") {
    CHECK(error_of("{\n  \"photon_energy_ev\": 1,\n  \"z_a\": \"two\"\n}") == "cfg.json:3: field 'z_a': expected an integer");
    CHECK(error_of("{\n \"colour\": 1\n}") == "cfg.json:2: field 'colour': unknown key");
    CHECK(error_of("{\"theta_points\": 4}").find("field 'theta_points'") != std::string::npos);
    CHECK(error_of("{\"polarization\": \"spiral\"}").find("field 'polarization'") != std::string::npos);
    CHECK(error_of("{\"n_range\": [9, 5]}").find("field 'n_range'") != std::string::npos);
    const std::string parse = error_of("{\n  \"a\": 1,,\n}");
    CHECK(parse.rfind("cfg.json:2:", 0) == 0);
    CHECK(parse.find("JSON parse error") != std::string::npos);
    CHECK(error_of("[1, 2]").find("JSON object") != std::string::npos);
}

TEST_CASE("RunConfig invariants") {
    RunConfig c = parse_config(R"J({"photon_energy_ev": 1})J");
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.intensity_xi = 1.0;
    CHECK_NOTHROW(c.validate());
    c.peak_field_v_per_cm = 1e10;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.peak_field_v_per_cm.reset();
    c.zeta = 0.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = parse_config(R"J({"photon_energy_ev": 1, "intensity_xi": 1, "polarization": "linear"})J");
    CHECK(c.zeta == 0.0);
    CHECK_NOTHROW(c.validate());
    c = parse_config(R"J({"zeta": 0.3, "photon_energy_ev": 1, "intensity_xi": 1, "polarization": "elliptic"})J");
    CHECK(c.zeta == 0.3);
    c.formula = "nonrelativistic";
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("apply_override") {
    RunConfig c = parse_config(R"J({"photon_energy_ev": 1, "intensity_xi": 1, "binding_energy_ev": 3})J");
    apply_override(c, "peak_field_v_per_cm", "1e11");
    CHECK_FALSE(c.intensity_xi);
    CHECK(*c.peak_field_v_per_cm == 1e11);
    apply_override(c, "intensity_xi", "0.5");
    CHECK_FALSE(c.peak_field_v_per_cm);
    apply_override(c, "n_range", "3,8");
    CHECK(c.n_range->second == 8);
    apply_override(c, "n_range", "auto");
    CHECK_FALSE(c.n_range);
    apply_override(c, "polarization", "linear");
    CHECK(c.zeta == 0.0);
    apply_override(c, "mode", "off");
    CHECK(c.mode == Rescattering::off);
    apply_override(c, "output_path", "some/dir");
    CHECK(c.output_path == "some/dir");
    apply_override(c, "binding_energy_ev", "hydrogenic");
    CHECK_FALSE(c.binding_energy_ev);
    CHECK_THROWS_AS(apply_override(c, "workers", "zero"), ConfigError);
}

TEST_CASE("format_double is the shortest round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(format_double(0.0) == "0");
    for (double v : {1.0 / 3.0, 2.0 / 7.0 * 1e-200, 6.02214076e23, -0.7853715380746061})
        CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("run_spectrum matches the golden file") {
    RunConfig c = load_config(kSource + "/configs/desk_circular.json");
    c.output_path = scratch("golden").string();
    REQUIRE(run_spectrum(c) == ok);
    const auto got = rows(slurp(fs::path(c.output_path) / "spectrum.csv"));
    const auto want = rows(slurp(kSource + "/tests/golden/desk_circular_spectrum.csv"));
    REQUIRE(got.size() == want.size());
    CHECK(got[0] == want[0]);
    CHECK(slurp(fs::path(c.output_path) / "spectrum.csv").rfind(
              "N,theta_rad,phi_rad,dwdo,kfr_only_dwdo,rescatter_factor,formula_tag\n", 0) == 0);
    for (std::size_t i = 1; i < got.size(); ++i) {
        REQUIRE(got[i].size() == want[i].size());
        for (std::size_t k = 0; k < got[i].size(); ++k) {
            const double a = std::stod(got[i][k]), b = std::stod(want[i][k]);
            CHECK(std::abs(a - b) <= 1e-12 * std::abs(b));
        }
    }
    const auto summary = nlohmann::json::parse(slurp(fs::path(c.output_path) / "summary.json"));
    CHECK(summary["flags"]["field_off"] == false);
    CHECK(summary["saddle"]["regime"] == "multiphoton_strongfield");
    CHECK(summary["derived"]["n0"] == 42);
}

TEST_CASE("run_spectrum with the field off") {
    RunConfig c = load_config(kSource + "/configs/desk_circular.json");
    c.intensity_xi = 0.0;
    c.output_path = scratch("off").string();
    REQUIRE(run_spectrum(c) == ok);
    const auto r = rows(slurp(fs::path(c.output_path) / "spectrum.csv"));
    REQUIRE(r.size() > 1);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(std::stod(r[i][3]) == 0.0);
    const auto summary = nlohmann::json::parse(slurp(fs::path(c.output_path) / "summary.json"));
    CHECK(summary["flags"]["field_off"] == true);
    CHECK(summary["saddle"].is_null());
}

TEST_CASE("run_spectrum is deterministic") {
    RunConfig c = load_config(kSource + "/configs/desk_circular.json");
    c.polarization = "elliptic";
    c.zeta = 0.5;
    c.phi_points = 3;
    c.output_path = scratch("det1").string();
    REQUIRE(run_spectrum(c) == ok);
    const std::string a = slurp(fs::path(c.output_path) / "spectrum.csv");
    c.output_path = scratch("det2").string();
    c.workers = 3;
    REQUIRE(run_spectrum(c) == ok);
    CHECK(slurp(fs::path(c.output_path) / "spectrum.csv") == a);
}

TEST_CASE("run_spectrum with both formula families") {
    RunConfig c = parse_config(R"J({"photon_energy_ev": 1533.0, "intensity_xi": 0.04, "theta_points": 8, "n_range": [1, 3], "formula": "both"})J");
    c.output_path = scratch("both").string();
    REQUIRE(run_spectrum(c) == ok);
    const auto r = rows(slurp(fs::path(c.output_path) / "spectrum.csv"));
    REQUIRE(r.size() == 1 + 2 * 3 * 8);
    CHECK(r[1][6] == "44");
    CHECK(r.back()[6] == "56");
}

TEST_CASE("run_spectrum error exits") {
    RunConfig c = load_config(kSource + "/configs/desk_circular.json");
    c.output_path = scratch("err").string();
    c.photon_energy_ev = 1e-6;
    c.n_range.reset();
    CHECK(run_spectrum(c) == resource_cap);
    c = load_config(kSource + "/configs/desk_circular.json");
    c.theta_points = 4;
    CHECK(run_spectrum(c) == config_error);
    CHECK_THROWS_AS(load_config(kSource + "/configs/does_not_exist.json"), ConfigError);
}

TEST_CASE("run_rate regime gating") {
    RunConfig t = load_config(kSource + "/configs/tunneling.json");
    t.output_path = scratch("tun").string();
    REQUIRE(run_rate(t) == ok);
    const auto tj = nlohmann::json::parse(slurp(fs::path(t.output_path) / "rate.json"));
    CHECK(tj["regime"] == "tunneling");
    CHECK(tj["methods"].contains("direct"));
    CHECK(tj["methods"].contains("tunneling_closed"));
    CHECK_FALSE(tj["methods"].contains("strongfield_closed"));
    CHECK(tj["methods"]["direct"].contains("grid_report"));

    RunConfig s = load_config(kSource + "/configs/strongfield.json");
    s.output_path = scratch("sf").string();
    REQUIRE(run_rate(s) == ok);
    const auto sj = nlohmann::json::parse(slurp(fs::path(s.output_path) / "rate.json"));
    CHECK(sj["regime"] == "multiphoton_strongfield");
    CHECK(sj["methods"].contains("strongfield_closed"));
    CHECK(sj["methods"].contains("airy_numeric"));
    CHECK_FALSE(sj["methods"].contains("tunneling_closed"));
    CHECK(sj["methods"]["direct"]["w_total"].get<double>() > 0.0);
}

TEST_CASE("run_sweep n_m grows with xi") {
    RunConfig c = load_config(kSource + "/configs/strongfield.json");
    c.output_path = scratch("sweep").string();
    std::vector<double> xs;
    for (int i = 0; i < 8; ++i) xs.push_back(0.3 * std::pow(10.0, i / 7.0));
    REQUIRE(run_sweep(c, "xi", xs, false) == ok);
    const auto r = rows(slurp(fs::path(c.output_path) / "sweep.csv"));
    REQUIRE(r.size() == 9);
    CHECK(r[0][4] == "n_m");
    for (std::size_t i = 2; i < r.size(); ++i) CHECK(std::stod(r[i][4]) > std::stod(r[i - 1][4]));
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double xi = std::stod(r[i][1]), w = std::stod(r[i][2]);
        CHECK(std::stod(r[i][4]) == doctest::Approx(xi * xi / w).epsilon(1e-2));
    }
    CHECK(run_sweep(c, "colour", xs, false) == config_error);
}

TEST_CASE("selftest passes and detects an injected fault") {
    const auto good = run_selftest_checks();
    for (const auto& c : good) {
        CAPTURE(c.name);
        CHECK(c.passed);
    }
    const auto bad = run_selftest_checks(SelftestOptions{true});
    bool recurrence_failed = false;
    for (const auto& c : bad)
        if (c.name == "recurrence") recurrence_failed = !c.passed;
    CHECK(recurrence_failed);
}
