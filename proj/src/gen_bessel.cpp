#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ati/constants.hpp"
#include "ati/errors.hpp"
#include "ati/specfun.hpp"

namespace ati::specfun {

void SeriesControl::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-6))
        throw std::invalid_argument("SeriesControl: rel_tol must lie in (0, 1e-6]");
    if (!(abs_floor >= 0.0)) throw std::invalid_argument("SeriesControl: abs_floor must be >= 0");
    if (max_terms < 1) throw std::invalid_argument("SeriesControl: max_terms must be positive");
    if (quad_points < 64 || quad_points % 2 != 0)
        throw std::invalid_argument("SeriesControl: quad_points must be even and >= 64");
}

namespace {

double reduce_angle(double d) {
    double r = std::remainder(d, 2.0 * kPi);  // [-pi, pi]
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

void check_args(double u, double v, double delta) {
    if (!std::isfinite(u) || !std::isfinite(v) || !std::isfinite(delta))
        throw RangeError("gen_bessel: non-finite argument");
}

int initial_terms(double v) {
    if (v == 0.0) return 0;
    const double av = std::abs(v);
    return static_cast<int>(std::ceil(av + 10.0 * std::cbrt(av) + 10.0));
}

}  // namespace

GenBesselArgs::GenBesselArgs(int n_, double u_, double v_, double delta_)
    : n(n_), u(u_), v(v_), delta(reduce_angle(delta_)) {
    check_args(u, v, delta_);
}

GenBesselSeries::GenBesselSeries(double u, double v, double delta, int n_lo, int n_hi,
                                 const SeriesControl& ctrl)
    : delta_(delta), n_lo_(n_lo), n_hi_(n_hi) {
    ctrl.validate();
    check_args(u, v, delta);
    if (n_lo > n_hi) throw std::invalid_argument("GenBesselSeries: empty order range");

    int k = initial_terms(v);
    for (;;) {
        if (k > ctrl.max_terms) {
            const double resid = k == 0 ? 0.0 : std::abs(ordinary_bessel(k, v));
            throw ConvergenceError("gen_bessel: series needs more than " +
                                       std::to_string(ctrl.max_terms) + " terms",
                                   resid);
        }
        if (k == 0) break;
        BesselTable tv(v, -k, k);
        double peak = 0.0;
        for (int j = 0; j <= k; ++j) peak = std::max(peak, std::abs(tv(j)));
        if (std::abs(tv(k)) <= ctrl.rel_tol * peak) break;
        k += 8;
    }
    k_ = k;

    BesselTable tv(v, -k_, k_);
    jv_.resize(2 * k_ + 1);
    phase_.resize(2 * k_ + 1);
    for (int j = -k_; j <= k_; ++j) {
        jv_[j + k_] = tv(j);
        phase_[j + k_] = std::polar(1.0, -2.0 * j * delta);
    }
    ju_lo_ = n_lo - 2 * k_;
    BesselTable tu(u, ju_lo_, n_hi + 2 * k_);
    ju_.resize(n_hi + 2 * k_ - ju_lo_ + 1);
    for (int m = ju_lo_; m <= n_hi + 2 * k_; ++m) ju_[m - ju_lo_] = tu(m);
}

cplx GenBesselSeries::operator()(int n) const {
    if (n < n_lo_ || n > n_hi_) throw std::out_of_range("GenBesselSeries: order outside range");
    cplx s = 0.0;
    for (int j = -k_; j <= k_; ++j) {
        const double b = jv_[j + k_];
        if (b == 0.0) continue;
        s += phase_[j + k_] * (ju_[n - 2 * j - ju_lo_] * b);
    }
    return s;
}

cplx gen_bessel(int n, double u, double v, double delta, const SeriesControl& ctrl) {
    return GenBesselSeries(u, v, delta, n, n, ctrl)(n);
}

cplx gen_bessel(const GenBesselArgs& a, const SeriesControl& ctrl) {
    return gen_bessel(a.n, a.u, a.v, a.delta, ctrl);
}

double gen_bessel_real(int n, double u, double v, const SeriesControl& ctrl) {
    const cplx z = gen_bessel(n, u, v, 0.0, ctrl);
    if (std::abs(z.imag()) > ctrl.abs_floor)
        throw std::logic_error("gen_bessel_real: imaginary part above abs_floor");
    return z.real();
}

int quadrature_nodes(int n, double u, double v, const SeriesControl& ctrl) {
    const int need = 2 * (std::abs(n) + static_cast<int>(std::ceil(std::abs(u))) +
                          2 * static_cast<int>(std::ceil(std::abs(v)))) +
                     64;
    int m = std::max(need, ctrl.quad_points);
    return m + m % 2;
}

cplx gen_bessel_quadrature(int n, double u, double v, double delta, const SeriesControl& ctrl) {
    ctrl.validate();
    check_args(u, v, delta);
    if (std::abs(n) > kMaxOrder || std::abs(u) > kMaxArgument || std::abs(v) > kMaxArgument)
        throw RangeError("gen_bessel_quadrature: outside supported range");
    const int m = quadrature_nodes(n, u, v, ctrl);
    double re = 0.0;
    double im = 0.0;
    for (int j = 0; j < m; ++j) {
        const double t = -kPi + 2.0 * kPi * j / m;
        const double ph = u * std::sin(t + delta) + v * std::sin(2.0 * t) - n * (t + delta);
        re += std::cos(ph);
        im += std::sin(ph);
    }
    return {re / m, im / m};
}

}  // namespace ati::specfun
