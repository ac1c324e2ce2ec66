#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ati/cli.hpp"
#include "ati/units.hpp"

namespace ati::cli {

using nlohmann::json;

namespace {

int line_of(const std::string& text, std::size_t pos) {
    int line = 1;
    for (std::size_t i = 0; i < pos && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

struct Ctx {
    const std::string& text;
    const std::string& origin;

    [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
        std::ostringstream os;
        os << origin;
        const auto pos = text.find("\"" + key + "\"");
        if (pos != std::string::npos) os << ":" << line_of(text, pos);
        os << ": field '" << key << "': " << msg;
        throw ConfigError(os.str());
    }
};

double number(const Ctx& c, const std::string& key, const json& v) {
    if (!v.is_number()) c.fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) c.fail(key, "expected a finite number");
    return d;
}

long long integer(const Ctx& c, const std::string& key, const json& v) {
    if (!v.is_number_integer()) c.fail(key, "expected an integer");
    return v.get<long long>();
}

std::string string(const Ctx& c, const std::string& key, const json& v) {
    if (!v.is_string()) c.fail(key, "expected a string");
    return v.get<std::string>();
}

void set_polarization(const Ctx& c, RunConfig& cfg, const std::string& s) {
    if (s == "circular") {
        cfg.polarization = s;
        cfg.zeta = 1.0;
    } else if (s == "linear") {
        cfg.polarization = s;
        cfg.zeta = 0.0;
    } else if (s == "elliptic") {
        cfg.polarization = s;
    } else if (s.rfind("elliptic(", 0) == 0 && s.back() == ')') {
        const std::string inner = s.substr(9, s.size() - 10);
        std::size_t used = 0;
        double z = 0.0;
        try {
            z = std::stod(inner, &used);
        } catch (const std::exception&) {
            c.fail("polarization", "cannot read zeta from '" + s + "'");
        }
        if (used != inner.size()) c.fail("polarization", "cannot read zeta from '" + s + "'");
        cfg.polarization = "elliptic";
        cfg.zeta = z;
    } else {
        c.fail("polarization", "expected circular, linear or elliptic(zeta), got '" + s + "'");
    }
}

void set_field(const Ctx& c, RunConfig& cfg, const std::string& key, const json& v) {
    if (key == "photon_energy_ev") {
        cfg.photon_energy_ev = number(c, key, v);
    } else if (key == "intensity_xi") {
        cfg.intensity_xi = number(c, key, v);
    } else if (key == "peak_field_v_per_cm") {
        cfg.peak_field_v_per_cm = number(c, key, v);
    } else if (key == "polarization") {
        set_polarization(c, cfg, string(c, key, v));
    } else if (key == "zeta") {
        cfg.zeta = number(c, key, v);
    } else if (key == "z_a") {
        const long long z = integer(c, key, v);
        if (z < 1 || z > 137) c.fail(key, "must lie in [1, 137]");
        cfg.z_a = static_cast<int>(z);
    } else if (key == "binding_energy_ev") {
        if (v.is_null())
            cfg.binding_energy_ev.reset();
        else
            cfg.binding_energy_ev = number(c, key, v);
    } else if (key == "theta_points") {
        const long long n = integer(c, key, v);
        if (n < 8 || n > 1000000) c.fail(key, "must be >= 8");
        cfg.theta_points = static_cast<int>(n);
    } else if (key == "phi_points") {
        const long long n = integer(c, key, v);
        if (n < 1 || n > 1000000) c.fail(key, "must be >= 1");
        cfg.phi_points = static_cast<int>(n);
    } else if (key == "n_range") {
        if (v.is_string() && v.get<std::string>() == "auto") {
            cfg.n_range.reset();
        } else if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
            const auto lo = v[0].get<long long>();
            const auto hi = v[1].get<long long>();
            if (lo < 0 || hi < lo) c.fail(key, "need 0 <= n_lo <= n_hi");
            cfg.n_range = std::make_pair(lo, hi);
        } else {
            c.fail(key, "expected \"auto\" or [n_lo, n_hi]");
        }
    } else if (key == "mode") {
        const std::string m = v.is_boolean() ? (v.get<bool>() ? "on" : "off") : string(c, key, v);
        if (m == "on")
            cfg.mode = Rescattering::on;
        else if (m == "off")
            cfg.mode = Rescattering::off;
        else
            c.fail(key, "expected on or off");
    } else if (key == "output_path") {
        cfg.output_path = string(c, key, v);
        if (cfg.output_path.empty()) c.fail(key, "must not be empty");
    } else if (key == "formula") {
        const std::string f = string(c, key, v);
        if (f != "relativistic" && f != "nonrelativistic" && f != "both")
            c.fail(key, "expected relativistic, nonrelativistic or both");
        cfg.formula = f;
    } else if (key == "workers") {
        const long long w = integer(c, key, v);
        if (w < 1 || w > 1024) c.fail(key, "must lie in [1, 1024]");
        cfg.workers = static_cast<unsigned>(w);
    } else {
        c.fail(key, "unknown key");
    }
}

}  // namespace

double RunConfig::omega() const { return units::ev_to_internal(photon_energy_ev.value_or(0.0)); }

double RunConfig::xi() const {
    if (intensity_xi) return *intensity_xi;
    if (peak_field_v_per_cm) return units::field_to_xi(*peak_field_v_per_cm, omega());
    return 0.0;
}

LaserField RunConfig::field() const { return LaserField{omega(), xi(), zeta}; }

Atom RunConfig::atom() const {
    if (binding_energy_ev) return Atom::with_binding(z_a, units::ev_to_internal(*binding_energy_ev));
    return Atom::hydrogen_like(z_a);
}

void RunConfig::validate() const {
    const std::string o = "config";
    auto bad = [&](const std::string& key, const std::string& msg) {
        throw ConfigError(o + ": field '" + key + "': " + msg);
    };
    if (!photon_energy_ev) bad("photon_energy_ev", "missing");
    if (!(*photon_energy_ev > 0.0)) bad("photon_energy_ev", "must be positive");
    if (intensity_xi.has_value() == peak_field_v_per_cm.has_value())
        bad("intensity_xi", "exactly one of intensity_xi and peak_field_v_per_cm is required");
    if (intensity_xi && !(*intensity_xi >= 0.0)) bad("intensity_xi", "must be >= 0");
    if (peak_field_v_per_cm && !(*peak_field_v_per_cm >= 0.0)) bad("peak_field_v_per_cm", "must be >= 0");
    if (!(std::abs(zeta) <= 1.0)) bad("zeta", "must satisfy |zeta| <= 1");
    if (polarization == "circular" && std::abs(zeta) != 1.0) bad("zeta", "circular polarization needs |zeta| = 1");
    if (polarization == "linear" && zeta != 0.0) bad("zeta", "linear polarization needs zeta = 0");
    if (binding_energy_ev && !(*binding_energy_ev > 0.0 && *binding_energy_ev < kElectronMassEv))
        bad("binding_energy_ev", "must lie in (0, 510998.95)");
    if (theta_points < 8) bad("theta_points", "must be >= 8");
    if (phi_points < 1) bad("phi_points", "must be >= 1");
    if (formula != "relativistic" && std::abs(zeta) != 1.0 && zeta != 0.0)
        bad("formula", "nonrelativistic formulas need circular or linear polarization");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t pos = e.byte > 0 ? e.byte - 1 : 0;
        std::size_t col = 1;
        for (std::size_t i = pos; i > 0 && text[i - 1] != '\n'; --i) ++col;
        throw ConfigError(origin + ":" + std::to_string(line_of(text, pos)) + ":" + std::to_string(col) +
                          ": JSON parse error: " + e.what());
    }
    if (!j.is_object()) throw ConfigError(origin + ": top level must be a JSON object");
    RunConfig cfg;
    const Ctx c{text, origin};
    // zeta must not be clobbered by a later polarization keyword
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "zeta") set_field(c, cfg, it.key(), it.value());
    if (j.contains("zeta")) set_field(c, cfg, "zeta", j["zeta"]);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    json v;
    std::string raw = value;
    if (key == "n_range" && raw.find(',') != std::string::npos && raw.front() != '[') raw = "[" + raw + "]";
    try {
        v = json::parse(raw);
    } catch (const json::parse_error&) {
        v = value;
    }
    const std::string origin = "command line";
    const std::string text;
    const Ctx c{text, origin};
    if (key == "intensity_xi") cfg.peak_field_v_per_cm.reset();
    if (key == "peak_field_v_per_cm") cfg.intensity_xi.reset();
    if (key == "binding_energy_ev" && value == "hydrogenic") v = nullptr;
    set_field(c, cfg, key, v);
}

}  // namespace ati::cli
