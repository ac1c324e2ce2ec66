#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "ati/cli.hpp"
#include "ati/constants.hpp"
#include "ati/errors.hpp"
#include "ati/rates.hpp"
#include "ati/units.hpp"

namespace ati::cli {

using nlohmann::ordered_json;

namespace {

constexpr long long kMaxRows = 20'000'000;

std::filesystem::path prepare_output(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.output_path);
    std::filesystem::create_directories(dir);
    return dir;
}

void write_text(const std::filesystem::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << s;
}

ordered_json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

ordered_json config_json(const RunConfig& cfg) {
    ordered_json j;
    j["photon_energy_ev"] = num(cfg.photon_energy_ev.value_or(0.0));
    if (cfg.intensity_xi) j["intensity_xi"] = num(*cfg.intensity_xi);
    if (cfg.peak_field_v_per_cm) j["peak_field_v_per_cm"] = num(*cfg.peak_field_v_per_cm);
    j["polarization"] = cfg.polarization;
    j["zeta"] = cfg.zeta;
    j["z_a"] = cfg.z_a;
    j["binding_energy_ev"] = cfg.binding_energy_ev ? num(*cfg.binding_energy_ev) : ordered_json(nullptr);
    j["theta_points"] = cfg.theta_points;
    j["phi_points"] = cfg.phi_points;
    if (cfg.n_range)
        j["n_range"] = {cfg.n_range->first, cfg.n_range->second};
    else
        j["n_range"] = "auto";
    j["mode"] = cfg.mode == Rescattering::on ? "on" : "off";
    j["formula"] = cfg.formula;
    return j;
}

ordered_json derived_json(const LaserField& f, const Atom& a, const DerivedParams& d) {
    ordered_json j;
    j["omega"] = num(f.omega);
    j["xi"] = num(f.xi);
    j["zeta"] = num(f.zeta);
    j["z_a"] = a.z_a;
    j["e_b"] = num(a.e_b);
    j["a"] = num(a.a);
    j["epsilon0"] = num(a.epsilon0);
    j["hydrogenic"] = a.hydrogenic;
    j["m_star"] = num(d.m_star);
    j["alpha_prime"] = num(d.alpha_prime);
    j["n0"] = d.n0;
    j["f0"] = num(d.f0);
    j["f_at"] = num(d.f_at);
    j["born_ratio"] = num(d.born_ratio);
    j["v_mean"] = num(d.v_mean);
    j["born_valid"] = d.born_valid;
    return j;
}

ordered_json saddle_json(const SaddleInfo& s) {
    ordered_json j;
    j["n_m"] = num(s.n_m);
    j["n_m_approx"] = num(s.n_m_approx);
    j["theta_m"] = num(s.theta_m);
    j["y_m"] = num(s.y_m);
    j["y_field"] = num(s.y_field);
    j["delta_n"] = num(s.delta_n);
    j["delta_theta"] = num(s.delta_theta);
    j["n_stationary"] = num(s.n_stationary);
    j["theta_stationary"] = num(s.theta_stationary);
    j["y_stationary"] = num(s.y_stationary);
    j["regime"] = to_string(s.regime);
    return j;
}

std::optional<SaddleInfo> try_saddle(const LaserField& f, const Atom& a, ordered_json& warnings) {
    if (f.xi <= 0.0) return std::nullopt;
    try {
        return saddle_point(f, a);
    } catch (const DegenerateSaddleError& e) {
        warnings.push_back(e.what());
        return std::nullopt;
    }
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const ChannelExplosionError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return resource_cap;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

int run_spectrum(const RunConfig& cfg) {
    return guarded([&] {
        cfg.validate();
        const LaserField f = cfg.field();
        const Atom a = cfg.atom();
        f.validate();
        const DerivedParams d = derive_params(f, a);
        ordered_json warnings = ordered_json::array();
        const auto s = try_saddle(f, a, warnings);

        long long lo = d.n0, hi = d.n0 + 10;
        if (cfg.n_range) {
            lo = cfg.n_range->first;
            hi = cfg.n_range->second;
        } else if (s) {
            hi = static_cast<long long>(std::ceil(s->n_m + 6.0 * s->delta_n));
        }
        SpectrumGrid grid;
        grid.n_lo = lo;
        grid.n_hi = hi;
        for (int j = 0; j < cfg.theta_points; ++j) grid.thetas.push_back(kPi * (j + 0.5) / cfg.theta_points);
        for (int k = 0; k < cfg.phi_points; ++k) grid.phis.push_back(2.0 * kPi * k / cfg.phi_points);
        const long long rows = (hi - lo + 1) * cfg.theta_points * cfg.phi_points;
        if (rows > kMaxRows)
            throw ChannelExplosionError(std::to_string(rows) + " spectrum rows exceed cap " +
                                        std::to_string(kMaxRows));

        std::vector<SpectrumPoint> pts;
        if (cfg.formula != "nonrelativistic") {
            auto r = spectrum(f, a, grid, cfg.mode, SpectrumFormula::relativistic, cfg.workers);
            pts.insert(pts.end(), r.begin(), r.end());
        }
        if (cfg.formula != "relativistic") {
            auto r = spectrum(f, a, grid, cfg.mode, SpectrumFormula::nonrelativistic, cfg.workers);
            pts.insert(pts.end(), r.begin(), r.end());
        }

        std::string csv = "N,theta_rad,phi_rad,dwdo,kfr_only_dwdo,rescatter_factor,formula_tag\n";
        long long below = 0;
        for (const auto& p : pts) {
            if (p.below_threshold) ++below;
            csv += std::to_string(p.n) + "," + format_double(p.theta) + "," + format_double(p.phi) + "," +
                   format_double(p.dwdo) + "," + format_double(p.kfr_only_dwdo) + "," +
                   format_double(p.rescatter_factor) + "," +
                   std::to_string(static_cast<int>(p.formula_tag)) + "\n";
        }

        if (!d.born_valid) warnings.push_back("Born condition violated: born_ratio above limit");
        ordered_json sum;
        sum["config"] = config_json(cfg);
        sum["derived"] = derived_json(f, a, d);
        sum["saddle"] = s ? saddle_json(*s) : ordered_json(nullptr);
        sum["flags"] = {{"field_off", f.xi == 0.0}, {"born_valid", d.born_valid}};
        sum["grid"] = {{"n_lo", lo}, {"n_hi", hi}, {"theta_points", cfg.theta_points},
                       {"phi_points", cfg.phi_points}, {"rows", static_cast<long long>(pts.size())},
                       {"below_threshold_rows", below}};
        sum["warnings"] = warnings;

        const auto dir = prepare_output(cfg);
        write_text(dir / "spectrum.csv", csv);
        write_text(dir / "summary.json", dump(sum));
        return static_cast<int>(ok);
    });
}

namespace {

ordered_json rate_json(const RateSummary& r) {
    ordered_json j;
    j["w_total"] = num(r.w_total);
    j["grid_report"] = {{"channels", r.grid.channels},
                        {"n_lo", r.grid.n_lo},
                        {"n_hi", r.grid.n_hi},
                        {"nodes", r.grid.nodes},
                        {"error_estimate", num(r.grid.error_estimate)},
                        {"accuracy_warning", r.grid.accuracy_warning}};
    if (r.method == RateMethod::airy_numeric) {
        j["peak_n"] = num(r.peak_n);
        j["peak_theta"] = num(r.peak_theta);
    }
    return j;
}

}  // namespace

int run_rate(const RunConfig& cfg) {
    return guarded([&] {
        cfg.validate();
        const LaserField f = cfg.field();
        const Atom a = cfg.atom();
        f.validate();
        const DerivedParams d = derive_params(f, a);
        ordered_json warnings = ordered_json::array();
        const auto s = try_saddle(f, a, warnings);

        ordered_json methods = ordered_json::object();
        DirectGrid dg;
        dg.theta_nodes = cfg.theta_points;
        dg.phi_points = cfg.phi_points;
        dg.workers = cfg.workers;
        if (cfg.n_range) {
            dg.n_lo = cfg.n_range->first;
            dg.n_hi = cfg.n_range->second;
        }
        if (f.xi == 0.0 || s) {
            const RateSummary r = rate_direct(f, a, dg, cfg.mode);
            methods["direct"] = rate_json(r);
            if (r.grid.accuracy_warning) warnings.push_back("direct: error estimate above 1% of w_total");
        }
        if (s && f.circular()) {
            AiryGrid ag;
            ag.workers = cfg.workers;
            try {
                methods["airy_numeric"] = rate_json(rate_airy(f, a, ag, cfg.mode));
            } catch (const AsymptoticsInvalidError& e) {
                warnings.push_back(std::string("airy_numeric skipped: ") + e.what());
            }
        }
        if (s && s->regime != Regime::intermediate) {
            const RateSummary r = rate_closed(f, a);
            methods[to_string(r.method)] = rate_json(r);
        }
        if (!d.born_valid) warnings.push_back("Born condition violated: born_ratio above limit");

        ordered_json out;
        out["config"] = config_json(cfg);
        out["derived"] = derived_json(f, a, d);
        out["saddle"] = s ? saddle_json(*s) : ordered_json(nullptr);
        out["regime"] = s ? ordered_json(to_string(s->regime)) : ordered_json(nullptr);
        out["methods"] = methods;
        out["warnings"] = warnings;
        const auto dir = prepare_output(cfg);
        write_text(dir / "rate.json", dump(out));
        return static_cast<int>(ok);
    });
}

int run_sweep(const RunConfig& base, const std::string& vary, const std::vector<double>& values,
              bool with_direct) {
    return guarded([&] {
        if (vary != "xi" && vary != "photon_energy_ev" && vary != "z_a")
            throw ConfigError("--vary: expected xi, photon_energy_ev or z_a");
        if (values.empty()) throw ConfigError("--values: at least one value required");
        std::string csv = "value,xi,omega,n0,n_m,theta_m,y_m,delta_n,delta_theta,regime,w_closed";
        if (with_direct) csv += ",w_direct";
        csv += "\n";
        for (double v : values) {
            RunConfig cfg = base;
            if (vary == "xi") {
                cfg.intensity_xi = v;
                cfg.peak_field_v_per_cm.reset();
            } else if (vary == "photon_energy_ev") {
                cfg.photon_energy_ev = v;
            } else {
                if (v != std::floor(v) || v < 1) throw ConfigError("--values: z_a must be a positive integer");
                cfg.z_a = static_cast<int>(v);
            }
            cfg.validate();
            const LaserField f = cfg.field();
            const Atom a = cfg.atom();
            f.validate();
            const DerivedParams d = derive_params(f, a);
            ordered_json warnings = ordered_json::array();
            const auto s = try_saddle(f, a, warnings);
            csv += format_double(v) + "," + format_double(f.xi) + "," + format_double(f.omega) + "," +
                   std::to_string(d.n0) + ",";
            if (s) {
                csv += format_double(s->n_m) + "," + format_double(s->theta_m) + "," + format_double(s->y_m) +
                       "," + format_double(s->delta_n) + "," + format_double(s->delta_theta) + "," +
                       to_string(s->regime) + ",";
                csv += s->regime != Regime::intermediate ? format_double(rate_closed(f, a).w_total) : "";
            } else {
                csv += ",,,,,,";
            }
            if (with_direct) {
                DirectGrid dg;
                dg.theta_nodes = cfg.theta_points;
                dg.phi_points = cfg.phi_points;
                dg.workers = cfg.workers;
                csv += "," + ((s || f.xi == 0.0) ? format_double(rate_direct(f, a, dg, cfg.mode).w_total) : "");
            }
            csv += "\n";
        }
        const auto dir = prepare_output(base);
        write_text(dir / "sweep.csv", csv);
        return static_cast<int>(ok);
    });
}

}  // namespace ati::cli
