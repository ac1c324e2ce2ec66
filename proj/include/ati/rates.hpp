#pragma once

#include <optional>
#include <string>

#include "ati/kinematics.hpp"
#include "ati/spectra.hpp"

namespace ati {

enum class Regime { multiphoton_strongfield, tunneling, intermediate };
enum class RateMethod { direct, airy_numeric, strongfield_closed, tunneling_closed, laplace };

std::string to_string(Regime r);
std::string to_string(RateMethod m);

struct SaddleOptions {
    double strongfield_max = 0.1;
    double tunneling_min = 10.0;
};

struct SaddleInfo {
    double n_m = 0.0;         // (m*^2 - eps0^2) / (eps0 omega)
    double n_m_approx = 0.0;  // xi^2 / omega
    double theta_m = 0.0;     // cos = |Pi(N_m)| / Pi0(N_m)
    double y_m = 0.0;         // 2^{1/3} E_B / (N^{1/3} omega) with N = n_m_approx
    double y_field = 0.0;     // (F_at / 2 F_0)^{2/3}
    double y_at_nm = 0.0;     // y(n_m, theta_m)
    double delta_n = 0.0;
    double delta_theta = 0.0;
    // true minimum of y(N, theta)
    double n_stationary = 0.0;
    double theta_stationary = 0.0;
    double y_stationary = 0.0;
    Regime regime = Regime::intermediate;
};

// y(N, theta) with N continuous, evaluated at phi = 0.
double airy_argument(const LaserField& field, const Atom& atom, double n, double theta);

SaddleInfo saddle_point(const LaserField& field, const Atom& atom, const SaddleOptions& opts = {});

struct GridReport {
    long long channels = 0;
    long long n_lo = 0;
    long long n_hi = 0;
    long long nodes = 0;
    double error_estimate = 0.0;
    bool accuracy_warning = false;
};

struct RateSummary {
    double w_total = 0.0;
    RateMethod method = RateMethod::direct;
    std::optional<SaddleInfo> saddle;
    Regime regime = Regime::intermediate;
    GridReport grid;
    // sampled integrand maximum (airy_numeric)
    double peak_n = 0.0;
    double peak_theta = 0.0;
};

struct DirectGrid {
    int theta_nodes = 64;  // the estimate compares against 2 * theta_nodes
    int phi_points = 16;
    double cut_widths = 6.0;
    std::optional<long long> n_lo;
    std::optional<long long> n_hi;
    long long channel_cap = 200000;
    double warn_fraction = 0.01;
    unsigned workers = 1;
};

RateSummary rate_direct(const LaserField& field, const Atom& atom, const DirectGrid& grid = {},
                        Rescattering mode = Rescattering::on);

struct AiryGrid {
    double n_step_per_width = 64.0;  // N step = delta_n / this
    double min_n_step = 0.25;
    int nodes_per_panel = 8;
    double panels_per_width = 4.0;  // panel width <= delta_theta / this
    double min_turning_ratio = 0.5;  // skip alpha / N below this
    double y_cutoff = 200.0;
    double cut_widths = 6.0;
    double min_n_m = 50.0;
    unsigned workers = 1;
};

RateSummary rate_airy(const LaserField& field, const Atom& atom, const AiryGrid& grid = {},
                      Rescattering mode = Rescattering::on);

// Laplace evaluation of the Airy-integral rate around the stationary point.
RateSummary rate_laplace(const LaserField& field, const Atom& atom, Rescattering mode = Rescattering::on);

// 2^{7/3} pi / (3^{4/3} Gamma(2/3)^2)
double strongfield_constant();

RateSummary rate_closed(const LaserField& field, const Atom& atom,
                        std::optional<Regime> force = std::nullopt, const SaddleOptions& opts = {});

}  // namespace ati
