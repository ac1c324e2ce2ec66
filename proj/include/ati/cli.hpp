#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ati/kinematics.hpp"
#include "ati/spectra.hpp"

namespace ati::cli {

enum Exit { ok = 0, failure = 1, config_error = 2, resource_cap = 3 };

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::optional<double> photon_energy_ev;
    std::optional<double> intensity_xi;
    std::optional<double> peak_field_v_per_cm;
    std::string polarization = "circular";  // circular | linear | elliptic(zeta)
    double zeta = 1.0;
    int z_a = 1;
    std::optional<double> binding_energy_ev;
    int theta_points = 32;
    int phi_points = 1;
    std::optional<std::pair<long long, long long>> n_range;  // empty = auto
    Rescattering mode = Rescattering::on;
    std::string output_path = "out";
    std::string formula = "relativistic";  // relativistic | nonrelativistic | both
    unsigned workers = 1;

    double omega() const;
    double xi() const;
    LaserField field() const;
    Atom atom() const;
    void validate() const;
};

// Flat JSON object; `origin` names the source in diagnostics.
RunConfig parse_config(const std::string& text, const std::string& origin = "config");
RunConfig load_config(const std::string& path);
// Applies a single "key=value"-style override using the JSON key names.
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

std::string format_double(double v);

int run_spectrum(const RunConfig& cfg);
int run_rate(const RunConfig& cfg);
int run_sweep(const RunConfig& cfg, const std::string& vary, const std::vector<double>& values,
              bool with_direct);

struct CheckResult {
    std::string name;
    bool passed = false;
    double worst = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct SelftestOptions {
    bool inject_fault = false;  // adds 1e-6 to every generalized Bessel value
};

std::vector<CheckResult> run_selftest_checks(const SelftestOptions& opts = {});
int run_selftest(bool json, const SelftestOptions& opts = {});

}  // namespace ati::cli
