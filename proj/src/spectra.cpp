#include "ati/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ati/constants.hpp"
#include "ati/errors.hpp"
#include "ati/parallel.hpp"

namespace ati {

namespace {

using specfun::cplx;

SpectrumPoint empty_point(long long n, double theta, double phi, FormulaTag tag) {
    SpectrumPoint p;
    p.n = n;
    p.theta = theta;
    p.phi = phi;
    p.formula_tag = tag;
    p.below_threshold = true;
    return p;
}

int as_order(long long n) {
    if (n > specfun::kMaxOrder || n < -specfun::kMaxOrder)
        throw RangeError("photon number " + std::to_string(n) + " outside supported Bessel range");
    return static_cast<int>(n);
}

double relativistic_prefactor(const Atom& atom, const ChannelKinematics& ck, double nz) {
    const double g4 = ck.g_sq * ck.g_sq;
    return 16.0 / (kPi * std::pow(atom.a, 5)) * nz * nz * ck.k_dot_pi * ck.k_dot_pi * ck.pi_abs /
           (g4 * g4);
}

void finish(SpectrumPoint& p) {
    p.kfr_only_dwdo = p.prefactor * std::norm(p.kfr_amplitude);
    p.dwdo = combine(p);
}

// Largest |n| for which J_n(x) is kept in the intermediate-photon sum.
int inner_range(double x) {
    if (x == 0.0) return 0;
    int k = static_cast<int>(std::ceil(std::abs(x))) + 40;
    double peak = 0.0;
    specfun::BesselTable t(x, 0, k);
    for (int j = 0; j <= k; ++j) peak = std::max(peak, std::abs(t(j)));
    while (std::abs(specfun::ordinary_bessel(k, x)) > 1e-17 * peak) k += 10;
    return k;
}

}  // namespace

double combine(const SpectrumPoint& p) {
    if (p.formula_tag == FormulaTag::nonrel_linear)
        return p.prefactor * (p.kfr_amplitude.real() * (p.kfr_amplitude + p.rescatter_amplitude).real());
    return p.prefactor * std::norm(p.kfr_amplitude + p.rescatter_amplitude);
}

SpectrumPoint dwdo_general(const LaserField& field, const Atom& atom, long long n, double theta,
                           double phi, Rescattering mode, const specfun::SeriesControl& ctrl) {
    ChannelKinematics ck;
    try {
        ck = channel_kinematics(field, atom, n, theta, phi);
    } catch (const BelowThresholdError&) {
        return empty_point(n, theta, phi, FormulaTag::general);
    }
    const int nn = as_order(n);
    const double z2 = field.zeta * field.zeta;
    const double ap = alpha_prime(field, atom);
    const double nz = n - ck.big_z * (1.0 + z2);
    // J_n(u, v, D + pi) = J_n(u, v, D): shifting the phase by pi only flips
    // the common sign (-1)^N of both terms, and keeps zeta = 0 exactly real.
    double tp = ck.phase_angle;
    double sign = 1.0;
    if (tp > 0.5 * kPi || tp <= -0.5 * kPi) {
        tp += tp > 0.0 ? -kPi : kPi;
        if (nn % 2 != 0) sign = -1.0;
    }

    SpectrumPoint p;
    p.n = n;
    p.theta = theta;
    p.phi = phi;
    p.formula_tag = FormulaTag::general;
    p.prefactor = relativistic_prefactor(atom, ck, nz);
    p.rescatter_factor = ck.g_sq / (2.0 * nz * ck.k_dot_pi);

    const double v_kfr = -0.5 * ck.big_z * (1.0 - z2);
    const specfun::GenBesselSeries kfr(ck.alpha_amp, v_kfr, tp, nn, nn, ctrl);
    p.kfr_amplitude = sign * std::polar(1.0, nn * tp) * kfr(nn);

    if (mode == Rescattering::on) {
        const double x = -0.5 * ap * (1.0 - z2);
        const int km = inner_range(x);
        const specfun::BesselTable jx(x, -km, km);
        const double v_c = 0.5 * (ck.big_z - ap) * (1.0 - z2);
        const specfun::GenBesselSeries c(ck.alpha_amp, v_c, tp, nn - 2 * km - 2, nn + 2 * km + 2, ctrl);
        const cplx e2m = std::polar(1.0, -2.0 * tp);
        const cplx e2p = std::polar(1.0, 2.0 * tp);
        cplx sum = 0.0;
        for (int k = -km; k <= km; ++k) {
            const double b = jx(k);
            if (b == 0.0) continue;
            const int s = nn - 2 * k;
            const cplx cs = std::conj(c(s));
            const cplx c2s = std::conj(0.5 * (c(s - 2) * e2m + c(s + 2) * e2p));
            const cplx bracket = (atom.epsilon0 + 2.0 * k * field.omega) * cs +
                                 field.omega * ap * (1.0 - z2) * c2s;
            sum += std::polar(1.0, -(2.0 * k - nn) * tp) * b * bracket;
        }
        p.rescatter_amplitude = sign * p.rescatter_factor * sum;
    }
    finish(p);
    return p;
}

SpectrumPoint dwdo_circular(const LaserField& field, const Atom& atom, long long n, double theta,
                            Rescattering mode) {
    if (!field.circular()) throw std::invalid_argument("dwdo_circular: requires |zeta| = 1");
    ChannelKinematics ck;
    try {
        ck = channel_kinematics(field, atom, n, theta, 0.0);
    } catch (const BelowThresholdError&) {
        return empty_point(n, theta, 0.0, FormulaTag::circular);
    }
    const double nz = n - 2.0 * ck.big_z;
    SpectrumPoint p;
    p.n = n;
    p.theta = theta;
    p.formula_tag = FormulaTag::circular;
    p.prefactor = relativistic_prefactor(atom, ck, nz);
    p.rescatter_factor = ck.g_sq / (2.0 * nz * ck.k_dot_pi);
    const double j = specfun::ordinary_bessel(as_order(n), ck.alpha_amp);
    p.kfr_amplitude = j;
    if (mode == Rescattering::on) p.rescatter_amplitude = p.rescatter_factor * j;
    finish(p);
    return p;
}

SpectrumPoint dwdo_linear(const LaserField& field, const Atom& atom, long long n, double theta,
                          double phi, Rescattering mode, const specfun::SeriesControl& ctrl) {
    if (!field.linear()) throw std::invalid_argument("dwdo_linear: requires zeta = 0");
    ChannelKinematics ck;
    try {
        ck = channel_kinematics(field, atom, n, theta, phi);
    } catch (const BelowThresholdError&) {
        return empty_point(n, theta, phi, FormulaTag::linear);
    }
    const int nn = as_order(n);
    const double ap = alpha_prime(field, atom);
    const double nz = n - ck.big_z;
    SpectrumPoint p;
    p.n = n;
    p.theta = theta;
    p.phi = phi;
    p.formula_tag = FormulaTag::linear;
    p.prefactor = relativistic_prefactor(atom, ck, nz);
    p.rescatter_factor = ck.g_sq / (2.0 * nz * ck.k_dot_pi);

    const specfun::GenBesselSeries kfr(ck.alpha_amp, -0.5 * ck.big_z, 0.0, nn, nn, ctrl);
    p.kfr_amplitude = kfr(nn).real();

    if (mode == Rescattering::on) {
        const double x = -0.5 * ap;
        const int km = inner_range(x);
        const specfun::BesselTable jx(x, -km, km);
        const specfun::GenBesselSeries c(ck.alpha_amp, 0.5 * (ck.big_z - ap), 0.0, nn - 2 * km - 2,
                                         nn + 2 * km + 2, ctrl);
        double sum = 0.0;
        for (int k = -km; k <= km; ++k) {
            const double b = jx(k);
            if (b == 0.0) continue;
            const int s = nn - 2 * k;
            sum += b * ((atom.epsilon0 + 2.0 * k * field.omega) * c(s).real() +
                        0.5 * field.omega * ap * (c(s - 2).real() + c(s + 2).real()));
        }
        p.rescatter_amplitude = p.rescatter_factor * sum;
    }
    finish(p);
    return p;
}

long long nonrel_threshold(const LaserField& field, const Atom& atom, Polarization pol) {
    const double z = field.xi * field.xi / (4.0 * field.omega);
    const double shift = (pol == Polarization::circular ? 2.0 * z : z) + atom.e_b / field.omega;
    auto n = static_cast<long long>(std::ceil(shift));
    while (n - shift < 0.0) ++n;
    return n;
}

SpectrumPoint dwdo_nonrel(const LaserField& field, const Atom& atom, long long n, double theta,
                          Polarization pol, Rescattering mode) {
    field.validate();
    atom.validate();
    const bool circ = pol == Polarization::circular;
    const FormulaTag tag = circ ? FormulaTag::nonrel_circular : FormulaTag::nonrel_linear;
    if (!(theta >= 0.0 && theta <= kPi)) throw std::invalid_argument("dwdo_nonrel: theta outside [0, pi]");
    const double w = field.omega;
    const double z = field.xi * field.xi / (4.0 * w);
    const double nz = n - (circ ? 2.0 * z : z);
    const double s = nz - atom.e_b / w;
    if (n < nonrel_threshold(field, atom, pol) || s < 0.0) return empty_point(n, theta, 0.0, tag);

    SpectrumPoint p;
    p.n = n;
    p.theta = theta;
    p.formula_tag = tag;
    p.prefactor = 8.0 * w / kPi * std::pow(atom.e_b / w, 2.5) * std::sqrt(s) / (nz * nz);
    p.rescatter_factor = s / nz;
    const int nn = as_order(n);
    double j;
    if (circ) {
        const double p_abs = std::sqrt(2.0 * w * s);
        j = specfun::ordinary_bessel(nn, field.xi / w * p_abs * std::sin(theta));
    } else {
        const double u = std::sqrt(8.0 * z * s) * std::cos(theta);
        j = specfun::gen_bessel_real(nn, u, -0.5 * z);
    }
    p.kfr_amplitude = j;
    if (mode == Rescattering::on) p.rescatter_amplitude = p.rescatter_factor * j;
    finish(p);
    return p;
}

SpectrumPoint dwdo(const LaserField& field, const Atom& atom, long long n, double theta, double phi,
                   Rescattering mode) {
    if (field.circular()) {
        SpectrumPoint p = dwdo_circular(field, atom, n, theta, mode);
        p.phi = phi;
        return p;
    }
    if (field.linear()) return dwdo_linear(field, atom, n, theta, phi, mode);
    return dwdo_general(field, atom, n, theta, phi, mode);
}

std::vector<SpectrumPoint> spectrum(const LaserField& field, const Atom& atom,
                                    const SpectrumGrid& grid, Rescattering mode,
                                    SpectrumFormula formula, unsigned workers) {
    field.validate();
    atom.validate();
    if (grid.n_hi < grid.n_lo || grid.thetas.empty() || grid.phis.empty())
        throw std::invalid_argument("spectrum: empty grid");
    Polarization pol = Polarization::circular;
    if (formula == SpectrumFormula::nonrelativistic) {
        if (field.linear())
            pol = Polarization::linear;
        else if (!field.circular())
            throw std::invalid_argument("spectrum: nonrelativistic formulas need circular or linear polarization");
    }
    const std::size_t nt = grid.thetas.size();
    const std::size_t np = grid.phis.size();
    const std::size_t nn = static_cast<std::size_t>(grid.n_hi - grid.n_lo + 1);
    return parallel_map<SpectrumPoint>(nn * nt * np, workers, [&](std::size_t i) {
        const long long n = grid.n_lo + static_cast<long long>(i / (nt * np));
        const double th = grid.thetas[(i / np) % nt];
        const double ph = grid.phis[i % np];
        if (formula == SpectrumFormula::nonrelativistic) {
            SpectrumPoint p = dwdo_nonrel(field, atom, n, th, pol, mode);
            p.phi = ph;
            return p;
        }
        return dwdo(field, atom, n, th, ph, mode);
    });
}

}  // namespace ati
