#include "ati/kinematics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ati/constants.hpp"
#include "ati/errors.hpp"

namespace ati {

void LaserField::validate() const {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw std::invalid_argument("LaserField: omega must be positive");
    if (!(xi >= 0.0) || !std::isfinite(xi)) throw std::invalid_argument("LaserField: xi must be >= 0");
    if (!(std::abs(zeta) <= 1.0)) throw std::invalid_argument("LaserField: |zeta| must be <= 1");
}

Atom Atom::hydrogen_like(int z_a) {
    const double eb = 0.5 * z_a * z_a * kAlphaFs * kAlphaFs;
    Atom at = with_binding(z_a, eb);
    at.hydrogenic = true;
    return at;
}

Atom Atom::with_binding(int z_a, double e_b) {
    Atom at;
    at.z_a = z_a;
    at.e_b = e_b;
    at.a = 1.0 / std::sqrt(2.0 * e_b);
    at.epsilon0 = 1.0 - e_b;
    at.hydrogenic = false;
    at.validate();
    return at;
}

void Atom::validate() const {
    if (z_a < 1) throw std::invalid_argument("Atom: z_a must be >= 1");
    if (!(e_b > 0.0 && e_b < 1.0)) throw std::invalid_argument("Atom: e_b must lie in (0, 1)");
}

double effective_mass(const LaserField& field) {
    return std::sqrt(1.0 + 0.5 * field.xi * field.xi * (1.0 + field.zeta * field.zeta));
}

double alpha_prime(const LaserField& field, const Atom& atom) {
    return field.xi * field.xi / (4.0 * field.omega * atom.epsilon0);
}

long long threshold_n0(const LaserField& field, const Atom& atom) {
    const double ms = effective_mass(field);
    auto n = static_cast<long long>(std::ceil((ms - atom.epsilon0) / field.omega));
    while (n > 0 && atom.epsilon0 + (n - 1) * field.omega >= ms) --n;
    while (atom.epsilon0 + n * field.omega < ms) ++n;
    return n;
}

DerivedParams derive_params(const LaserField& field, const Atom& atom, const DeriveOptions& opts) {
    field.validate();
    atom.validate();
    DerivedParams d;
    d.m_star = effective_mass(field);
    const double n0_real = (d.m_star - atom.epsilon0) / field.omega;
    if (n0_real > static_cast<double>(opts.n0_cap))
        throw ChannelExplosionError("threshold photon number " + std::to_string(n0_real) +
                                    " exceeds cap " + std::to_string(opts.n0_cap));
    d.n0 = threshold_n0(field, atom);
    d.alpha_prime = alpha_prime(field, atom);
    const double e = std::sqrt(kAlphaFs);
    d.f0 = field.omega * field.xi / e;
    d.f_at = std::pow(atom.z_a, 3) * std::pow(e, 5);
    d.v_mean = field.xi / std::sqrt(1.0 + field.xi * field.xi);
    d.born_ratio = field.xi > 0.0 ? atom.z_a * kAlphaFs / d.v_mean
                                  : std::numeric_limits<double>::infinity();
    d.born_valid = d.born_ratio <= opts.born_limit;
    return d;
}

ChannelKinematics channel_kinematics(const LaserField& field, const Atom& atom, long long n,
                                     double theta, double phi) {
    if (!(theta >= 0.0 && theta <= kPi)) throw std::invalid_argument("channel_kinematics: theta outside [0, pi]");
    const long long n0 = threshold_n0(field, atom);
    if (n < n0)
        throw BelowThresholdError("channel N = " + std::to_string(n) + " below threshold " +
                                  std::to_string(n0));
    const double w = field.omega;
    const double ms = effective_mass(field);
    ChannelKinematics c;
    c.n = n;
    c.theta = theta;
    c.phi = phi;
    c.pi0 = atom.epsilon0 + n * w;
    c.pi_abs = std::sqrt((c.pi0 - ms) * (c.pi0 + ms));
    const double s2 = std::sin(0.5 * theta);
    const double half = 2.0 * s2 * s2;  // 1 - cos(theta)
    c.k_dot_pi = w * (ms * ms / (c.pi0 + c.pi_abs) + c.pi_abs * half);
    c.big_z = field.xi * field.xi / (4.0 * c.k_dot_pi);
    const double nw = n * w;
    c.g_sq = (c.pi_abs - nw) * (c.pi_abs - nw) + 2.0 * nw * c.pi_abs * half;
    const double st = c.pi_abs * std::sin(theta);
    const double cp = std::cos(phi);
    const double sp = std::sin(phi);
    c.alpha_amp = field.xi * st * std::sqrt(cp * cp + field.zeta * field.zeta * sp * sp) / c.k_dot_pi;
    c.phase_angle = std::atan2(field.zeta * st * sp, st * cp);
    return c;
}

std::array<double, 4> kinetic_momentum(const LaserField& field, const ChannelKinematics& ck) {
    const double shift = field.omega * ck.big_z * (1.0 + field.zeta * field.zeta);
    const double st = ck.pi_abs * std::sin(ck.theta);
    return {ck.pi0 - shift, st * std::cos(ck.phi), st * std::sin(ck.phi),
            ck.pi_abs * std::cos(ck.theta) - shift};
}

}  // namespace ati
