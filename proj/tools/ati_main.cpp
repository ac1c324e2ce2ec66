#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ati/cli.hpp"

using namespace ati::cli;

namespace {

struct Overrides {
    std::vector<std::pair<std::string, std::string>> items;

    void add(CLI::App* app) {
        const std::pair<const char*, const char*> keys[] = {
            {"--photon-energy-ev", "photon_energy_ev"},
            {"--xi", "intensity_xi"},
            {"--peak-field", "peak_field_v_per_cm"},
            {"--polarization", "polarization"},
            {"--zeta", "zeta"},
            {"--z-a", "z_a"},
            {"--binding-energy-ev", "binding_energy_ev"},
            {"--theta-points", "theta_points"},
            {"--phi-points", "phi_points"},
            {"--n-range", "n_range"},
            {"--mode", "mode"},
            {"-o,--output", "output_path"},
            {"--formula", "formula"},
            {"--workers", "workers"},
        };
        for (const auto& [flag, key] : keys) {
            const std::string k = key;
            app->add_option_function<std::string>(
                   flag, [this, k](const std::string& v) { items.emplace_back(k, v); },
                   "override config key " + k)
                ->type_name("VALUE");
        }
    }
};

std::vector<double> parse_values(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw ConfigError("--values: cannot parse '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--values: empty list");
    return out;
}

RunConfig build(const std::string& path, const Overrides& ov) {
    RunConfig cfg = load_config(path);
    bool xi = false, field = false;
    for (const auto& [k, v] : ov.items) {
        xi = xi || k == "intensity_xi";
        field = field || k == "peak_field_v_per_cm";
    }
    if (xi && field) throw ConfigError("command line: --xi and --peak-field are mutually exclusive");
    for (const auto& [k, v] : ov.items) apply_override(cfg, k, v);
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relativistic ATI spectra and ionization rates of hydrogen-like atoms"};
    app.require_subcommand(1);

    std::string config;
    Overrides ov_spec, ov_rate, ov_sweep;

    auto* spec = app.add_subcommand("spectrum", "differential ionization spectrum to CSV");
    spec->add_option("-c,--config", config, "JSON config file")->required();
    ov_spec.add(spec);

    auto* rate = app.add_subcommand("rate", "total ionization rate by all applicable methods");
    rate->add_option("-c,--config", config, "JSON config file")->required();
    ov_rate.add(rate);

    std::string vary, values;
    bool direct = false;
    auto* sweep = app.add_subcommand("sweep", "saddle data and closed-form rates over one parameter");
    sweep->add_option("-c,--config", config, "JSON config file")->required();
    sweep->add_option("--vary", vary, "xi, photon_energy_ev or z_a")->required();
    sweep->add_option("--values", values, "comma-separated list")->required();
    sweep->add_flag("--direct", direct, "also evaluate the direct channel sum");
    ov_sweep.add(sweep);

    bool json = false, fault = false;
    auto* self = app.add_subcommand("selftest", "run the identity and oracle suites");
    self->add_flag("--json", json, "machine-readable report");
    self->add_flag("--inject-fault", fault)->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (*spec) return run_spectrum(build(config, ov_spec));
        if (*rate) return run_rate(build(config, ov_rate));
        if (*sweep) return run_sweep(build(config, ov_sweep), vary, parse_values(values), direct);
        return run_selftest(json, SelftestOptions{fault});
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
}
