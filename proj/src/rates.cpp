#include "ati/rates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "ati/constants.hpp"
#include "ati/errors.hpp"
#include "ati/parallel.hpp"
#include "ati/quadrature.hpp"
#include "ati/specfun.hpp"

namespace ati {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::multiphoton_strongfield: return "multiphoton_strongfield";
        case Regime::tunneling: return "tunneling";
        case Regime::intermediate: return "intermediate";
    }
    return "?";
}

std::string to_string(RateMethod m) {
    switch (m) {
        case RateMethod::direct: return "direct";
        case RateMethod::airy_numeric: return "airy_numeric";
        case RateMethod::strongfield_closed: return "strongfield_closed";
        case RateMethod::tunneling_closed: return "tunneling_closed";
        case RateMethod::laplace: return "laplace";
    }
    return "?";
}

namespace {

// Channel kinematics with N continuous, phi = 0.
struct ContKin {
    double pi0, pi_abs, kpi, big_z, alpha, g_sq;
};

ContKin cont_kin(const LaserField& f, const Atom& atom, double ms, double n, double theta) {
    ContKin c;
    c.pi0 = atom.epsilon0 + n * f.omega;
    c.pi_abs = std::sqrt(std::max(0.0, (c.pi0 - ms) * (c.pi0 + ms)));
    const double s2 = std::sin(0.5 * theta);
    const double half = 2.0 * s2 * s2;
    c.kpi = f.omega * (ms * ms / (c.pi0 + c.pi_abs) + c.pi_abs * half);
    c.big_z = f.xi * f.xi / (4.0 * c.kpi);
    c.alpha = f.xi * c.pi_abs * std::sin(theta) / c.kpi;
    const double nw = n * f.omega;
    c.g_sq = (c.pi_abs - nw) * (c.pi_abs - nw) + 2.0 * nw * c.pi_abs * half;
    return c;
}

double y_of(double n, double alpha) {
    return std::pow(0.5 * n, 2.0 / 3.0) * (n - alpha) * (n + alpha) / (n * n);
}

// Airy-rate integrand without the Ai^2 factor (includes sin theta).
double airy_weight(const Atom& atom, const ContKin& c, double n, double theta,
                   Rescattering mode) {
    const double nz = n - 2.0 * c.big_z;
    const double g4 = c.g_sq * c.g_sq;
    double w = 32.0 / std::pow(atom.a, 5) * std::sin(theta) * std::cbrt(4.0 / (n * n)) * nz * nz *
               c.kpi * c.kpi * c.pi_abs / (g4 * g4);
    if (mode == Rescattering::on) {
        const double r = c.g_sq / (2.0 * nz * c.kpi);
        w *= (1.0 + r) * (1.0 + r);
    }
    return w;
}

double theta_star(double ms, double pi_abs) { return std::atan2(ms, pi_abs); }

Regime classify(double y, const SaddleOptions& o) {
    if (y <= o.strongfield_max) return Regime::multiphoton_strongfield;
    if (y >= o.tunneling_min) return Regime::tunneling;
    return Regime::intermediate;
}

double y_m_formula(const LaserField& f, const Atom& atom) {
    const double n = f.xi * f.xi / f.omega;
    return std::cbrt(2.0) * atom.e_b / (std::cbrt(n) * f.omega);
}

}  // namespace

double airy_argument(const LaserField& field, const Atom& atom, double n, double theta) {
    const double ms = effective_mass(field);
    const ContKin c = cont_kin(field, atom, ms, n, theta);
    return y_of(n, c.alpha);
}

SaddleInfo saddle_point(const LaserField& field, const Atom& atom, const SaddleOptions& opts) {
    field.validate();
    atom.validate();
    if (!(field.xi > 0.0)) throw std::invalid_argument("saddle_point: requires xi > 0");
    const double ms = effective_mass(field);
    const double e0 = atom.epsilon0;
    const double w = field.omega;
    SaddleInfo s;
    s.n_m = (ms - e0) * (ms + e0) / (e0 * w);
    s.n_m_approx = field.xi * field.xi / w;
    const long long n0 = threshold_n0(field, atom);
    if (s.n_m < static_cast<double>(n0))
        throw DegenerateSaddleError("most probable photon number " + std::to_string(s.n_m) +
                                    " lies below threshold " + std::to_string(n0));
    const ContKin cm = cont_kin(field, atom, ms, s.n_m, 0.0);
    s.theta_m = theta_star(ms, cm.pi_abs);
    s.y_m = y_m_formula(field, atom);
    const double e = std::sqrt(kAlphaFs);
    const double f0 = w * field.xi / e;
    const double f_at = std::pow(atom.z_a, 3) * std::pow(e, 5);
    s.y_field = std::pow(f_at / (2.0 * f0), 2.0 / 3.0);
    s.y_at_nm = airy_argument(field, atom, s.n_m, s.theta_m);
    s.delta_n = 2.0 * std::pow(0.5 * s.n_m, 2.0 / 3.0);
    s.delta_theta = std::pow(0.5 * s.n_m, -1.0 / 3.0) / std::sqrt(1.0 + field.xi * field.xi);

    // theta* (N) is analytic: alpha is maximal at cos theta = |Pi| / Pi0.
    auto along = [&](double n) {
        const ContKin c = cont_kin(field, atom, ms, n, 0.0);
        return y_of(n, field.xi * c.pi_abs / (w * ms));
    };
    double a = (ms - e0) / w;
    double b = std::max(4.0 * s.n_m, a + 10.0);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = along(x1), f2 = along(x2);
    for (int it = 0; it < 400 && (b - a) > 1e-14 * b; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = along(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = along(x2);
        }
    }
    s.n_stationary = 0.5 * (a + b);
    s.theta_stationary = theta_star(ms, cont_kin(field, atom, ms, s.n_stationary, 0.0).pi_abs);
    s.y_stationary = airy_argument(field, atom, s.n_stationary, s.theta_stationary);
    s.regime = classify(s.y_m, opts);
    return s;
}

RateSummary rate_direct(const LaserField& field, const Atom& atom, const DirectGrid& grid,
                        Rescattering mode) {
    field.validate();
    atom.validate();
    if (grid.theta_nodes < 2) throw std::invalid_argument("rate_direct: theta_nodes must be >= 2");
    RateSummary out;
    out.method = RateMethod::direct;
    if (field.xi == 0.0) {
        out.regime = Regime::intermediate;
        return out;
    }
    const DerivedParams dp = derive_params(field, atom);
    const SaddleInfo s = saddle_point(field, atom);
    out.saddle = s;
    out.regime = s.regime;
    const long long lo = grid.n_lo.value_or(dp.n0);
    const long long hi =
        grid.n_hi.value_or(static_cast<long long>(std::ceil(s.n_m + grid.cut_widths * s.delta_n)));
    if (hi < lo) throw std::invalid_argument("rate_direct: empty channel range");
    const long long channels = hi - lo + 1;
    if (channels > grid.channel_cap)
        throw ChannelExplosionError(std::to_string(channels) + " channels exceed cap " +
                                    std::to_string(grid.channel_cap));

    const GaussRule coarse = gauss_legendre(grid.theta_nodes);
    const GaussRule fine = gauss_legendre(2 * grid.theta_nodes);
    const bool circ = field.circular();
    const int np = circ ? 1 : std::max(1, grid.phi_points);

    auto integrate = [&](long long n, const GaussRule& g) {
        std::vector<double> terms(g.x.size() * np);
        for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double th = std::acos(g.x[i]);
            for (int k = 0; k < np; ++k) {
                const double ph = 2.0 * kPi * k / np;
                terms[i * np + k] = g.w[i] * dwdo(field, atom, n, th, ph, mode).dwdo;
            }
        }
        return 2.0 * kPi / np * pairwise_sum(terms);
    };
    struct Pair {
        double c = 0.0, f = 0.0;
    };
    const auto per = parallel_map<Pair>(static_cast<std::size_t>(channels), grid.workers,
                                        [&](std::size_t i) {
                                            const long long n = lo + static_cast<long long>(i);
                                            return Pair{integrate(n, coarse), integrate(n, fine)};
                                        });
    std::vector<double> vc(per.size()), vf(per.size());
    for (std::size_t i = 0; i < per.size(); ++i) {
        vc[i] = per[i].c;
        vf[i] = per[i].f;
    }
    const double wc = pairwise_sum(vc);
    const double wf = pairwise_sum(vf);
    out.w_total = wf;
    out.grid.channels = channels;
    out.grid.n_lo = lo;
    out.grid.n_hi = hi;
    out.grid.nodes = channels * 3 * grid.theta_nodes * np;
    out.grid.error_estimate = std::abs(wf - wc);
    out.grid.accuracy_warning = out.grid.error_estimate > grid.warn_fraction * std::abs(wf);
    return out;
}

RateSummary rate_airy(const LaserField& field, const Atom& atom, const AiryGrid& grid,
                      Rescattering mode) {
    field.validate();
    atom.validate();
    if (!field.circular()) throw std::invalid_argument("rate_airy: requires circular polarization");
    const SaddleInfo s = saddle_point(field, atom);
    if (s.n_m < grid.min_n_m)
        throw AsymptoticsInvalidError("N_m = " + std::to_string(s.n_m) +
                                      " too small for the Airy asymptotics");
    const double ms = effective_mass(field);
    const double n_lo = static_cast<double>(threshold_n0(field, atom));
    const double n_hi = s.n_m + grid.cut_widths * s.delta_n;
    const double h0 = std::max(s.delta_n / grid.n_step_per_width, grid.min_n_step);
    const auto intervals = static_cast<std::size_t>(std::max(1.0, std::ceil((n_hi - n_lo) / h0)));
    const double h = (n_hi - n_lo) / static_cast<double>(intervals);

    const double width = std::min(kPi / 8.0, s.delta_theta / grid.panels_per_width);
    const int panels = static_cast<int>(std::ceil(kPi / width));
    const GaussRule rule = composite_gauss(0.0, kPi, panels, grid.nodes_per_panel);

    struct Row {
        double integral = 0.0;
        double peak = 0.0;
        double peak_theta = 0.0;
    };
    const auto rows = parallel_map<Row>(intervals + 1, grid.workers, [&](std::size_t j) {
        const double n = n_lo + h * static_cast<double>(j);
        Row r;
        std::vector<double> terms(rule.x.size(), 0.0);
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double th = rule.x[i];
            const ContKin c = cont_kin(field, atom, ms, n, th);
            if (c.alpha < grid.min_turning_ratio * n) continue;
            const double y = y_of(n, c.alpha);
            if (y > grid.y_cutoff) continue;
            const double ai = specfun::airy_ai(y);
            const double v = airy_weight(atom, c, n, th, mode) * ai * ai;
            terms[i] = rule.w[i] * v;
            if (v > r.peak) {
                r.peak = v;
                r.peak_theta = th;
            }
        }
        r.integral = pairwise_sum(terms);
        return r;
    });
    std::vector<double> weighted(rows.size());
    RateSummary out;
    double best = -1.0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        const double tw = (j == 0 || j + 1 == rows.size()) ? 0.5 * h : h;
        weighted[j] = tw * rows[j].integral;
        if (rows[j].peak > best) {
            best = rows[j].peak;
            out.peak_n = n_lo + h * static_cast<double>(j);
            out.peak_theta = rows[j].peak_theta;
        }
    }
    out.w_total = pairwise_sum(weighted);
    out.method = RateMethod::airy_numeric;
    out.saddle = s;
    out.regime = s.regime;
    out.grid.n_lo = static_cast<long long>(n_lo);
    out.grid.n_hi = static_cast<long long>(std::ceil(n_hi));
    out.grid.channels = 0;
    out.grid.nodes = static_cast<long long>(rows.size() * rule.x.size());
    return out;
}

RateSummary rate_laplace(const LaserField& field, const Atom& atom, Rescattering mode) {
    field.validate();
    atom.validate();
    if (!field.circular()) throw std::invalid_argument("rate_laplace: requires circular polarization");
    const SaddleInfo s = saddle_point(field, atom);
    const double n = s.n_stationary;
    const double t = s.theta_stationary;
    const double hn = 1e-2 * s.delta_n;
    const double ht = 1e-2 * s.delta_theta;
    auto y = [&](double a, double b) { return airy_argument(field, atom, a, b); };
    const double y0 = y(n, t);
    const double ynn = (y(n + hn, t) - 2.0 * y0 + y(n - hn, t)) / (hn * hn);
    const double ytt = (y(n, t + ht) - 2.0 * y0 + y(n, t - ht)) / (ht * ht);
    const double ynt =
        (y(n + hn, t + ht) - y(n + hn, t - ht) - y(n - hn, t + ht) + y(n - hn, t - ht)) / (4.0 * hn * ht);
    const double det = ynn * ytt - ynt * ynt;
    if (!(det > 0.0)) throw DegenerateSaddleError("rate_laplace: Hessian of y is not positive definite");
    const double ms = effective_mass(field);
    const ContKin c = cont_kin(field, atom, ms, n, t);
    const double pref = airy_weight(atom, c, n, t, mode);
    const specfun::AiryValue a = specfun::airy(y0);
    RateSummary out;
    out.w_total = pref * 2.0 * kPi / std::sqrt(det) * (a.aip * a.aip - y0 * a.ai * a.ai);
    out.method = RateMethod::laplace;
    out.saddle = s;
    out.regime = s.regime;
    out.peak_n = n;
    out.peak_theta = t;
    return out;
}

double strongfield_constant() {
    return std::pow(2.0, 7.0 / 3.0) * kPi / (std::pow(3.0, 4.0 / 3.0) * kGammaTwoThirds * kGammaTwoThirds);
}

RateSummary rate_closed(const LaserField& field, const Atom& atom, std::optional<Regime> force,
                        const SaddleOptions& opts) {
    field.validate();
    atom.validate();
    if (!(field.xi > 0.0)) throw std::invalid_argument("rate_closed: requires xi > 0");
    RateSummary out;
    const Regime detected = classify(y_m_formula(field, atom), opts);
    try {
        out.saddle = saddle_point(field, atom, opts);
    } catch (const DegenerateSaddleError&) {
    }
    const Regime use = force.value_or(detected);
    if (use == Regime::intermediate)
        throw RegimeError("closed-form rate undefined in the intermediate regime (y_m = " +
                          std::to_string(y_m_formula(field, atom)) + ")");
    out.regime = detected;
    const double e = std::sqrt(kAlphaFs);
    const double w = field.omega;
    const double f0 = w * field.xi / e;
    const double f_at = std::pow(atom.z_a, 3) * std::pow(e, 5);
    const double base = w * std::pow(w / atom.e_b, 3);
    if (use == Regime::multiphoton_strongfield) {
        out.method = RateMethod::strongfield_closed;
        out.w_total = strongfield_constant() * base * std::pow(f_at / f0, 11.0 / 3.0);
    } else {
        out.method = RateMethod::tunneling_closed;
        out.w_total = 2.0 * base * std::pow(f_at / f0, 3) * std::exp(-2.0 / 3.0 * f_at / f0);
    }
    return out;
}

}  // namespace ati
