#pragma once

#include <array>

namespace ati {

// Plane wave along +z, e1 = x, e2 = y. Natural units with m = 1.
struct LaserField {
    double omega = 0.0;
    double xi = 0.0;
    double zeta = 1.0;  // 0 linear, +-1 circular

    void validate() const;
    bool circular() const { return zeta == 1.0 || zeta == -1.0; }
    bool linear() const { return zeta == 0.0; }
};

struct Atom {
    int z_a = 1;
    double e_b = 0.0;
    double a = 0.0;         // 2 e_b a^2 = 1
    double epsilon0 = 0.0;  // 1 - e_b
    bool hydrogenic = true;

    static Atom hydrogen_like(int z_a);
    static Atom with_binding(int z_a, double e_b);
    void validate() const;
};

struct DeriveOptions {
    double born_limit = 0.2;
    long long n0_cap = 10'000'000;
};

struct DerivedParams {
    double m_star = 1.0;
    double alpha_prime = 0.0;
    long long n0 = 0;
    double f0 = 0.0;
    double f_at = 0.0;
    double born_ratio = 0.0;  // +inf when xi = 0
    double v_mean = 0.0;
    bool born_valid = false;
};

double effective_mass(const LaserField& field);
double alpha_prime(const LaserField& field, const Atom& atom);
// Smallest N with epsilon0 + N omega >= m_star; no cap applied.
long long threshold_n0(const LaserField& field, const Atom& atom);

DerivedParams derive_params(const LaserField& field, const Atom& atom,
                            const DeriveOptions& opts = {});

struct ChannelKinematics {
    long long n = 0;
    double theta = 0.0;
    double phi = 0.0;
    double pi0 = 0.0;
    double pi_abs = 0.0;
    double k_dot_pi = 0.0;
    double big_z = 0.0;
    double g_sq = 0.0;
    double alpha_amp = 0.0;
    double phase_angle = 0.0;
};

ChannelKinematics channel_kinematics(const LaserField& field, const Atom& atom, long long n,
                                     double theta, double phi);

// Kinetic four-momentum p = Pi - k Z (1 + zeta^2) as (p0, px, py, pz).
std::array<double, 4> kinetic_momentum(const LaserField& field, const ChannelKinematics& ck);

}  // namespace ati
