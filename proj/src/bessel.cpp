#include "ati/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "ati/constants.hpp"
#include "ati/errors.hpp"

namespace ati::specfun {

namespace {

constexpr double kRescaleAbove = 1e120;
constexpr int kRescaleBits = 400;

void check_range(int n, double x) {
    if (!std::isfinite(x))
        throw RangeError("bessel: non-finite argument");
    if (std::abs(n) > kMaxOrder || std::abs(x) > kMaxArgument)
        throw RangeError("bessel: order " + std::to_string(n) + " / argument " +
                         std::to_string(x) + " outside supported range");
}

// Miller downward recurrence for J_0..J_m(x), x > 0. Normalised by
// J_0^2 + 2 sum J_k^2 = 1, sign fixed by J_0 + 2 sum J_2k = 1.
std::vector<double> miller(double x, int m) {
    const int top = std::max(m, static_cast<int>(std::ceil(x)));
    int start = top + 20 + static_cast<int>(std::ceil(15.0 * std::cbrt(x)));
    start += start % 2;

    std::vector<double> raw(m + 1, 0.0);
    std::vector<int> scale(m + 1, 0);
    int rescales = 0;
    double fp1 = 0.0;
    double f = 1.0;
    double sumsq = 0.0;
    double sumeven = 0.0;
    const double down = std::ldexp(1.0, -kRescaleBits);
    const double down2 = std::ldexp(1.0, -2 * kRescaleBits);

    for (int k = start; k >= 1; --k) {
        if (k <= m) {
            raw[k] = f;
            scale[k] = rescales;
        }
        sumsq += 2.0 * f * f;
        if (k % 2 == 0) sumeven += 2.0 * f;
        const double fm1 = (2.0 * k / x) * f - fp1;
        fp1 = f;
        f = fm1;
        if (std::abs(f) > kRescaleAbove) {
            f *= down;
            fp1 *= down;
            sumsq *= down2;
            sumeven *= down;
            ++rescales;
        }
    }
    raw[0] = f;
    scale[0] = rescales;
    sumsq += f * f;
    sumeven += f;

    const double norm = (sumeven < 0.0 ? -1.0 : 1.0) / std::sqrt(sumsq);
    for (int k = 0; k <= m; ++k)
        raw[k] = std::ldexp(raw[k] * norm, -kRescaleBits * (rescales - scale[k]));
    return raw;
}

}  // namespace

BesselTable::BesselTable(double x, int n_lo, int n_hi) : x_(x), lo_(n_lo), hi_(n_hi) {
    if (n_lo > n_hi) throw std::invalid_argument("BesselTable: empty order range");
    check_range(n_lo, x);
    check_range(n_hi, x);
    nabs_ = std::max(std::abs(n_lo), std::abs(n_hi));
    if (x == 0.0) {
        pos_.assign(nabs_ + 1, 0.0);
        pos_[0] = 1.0;
    } else {
        pos_ = miller(std::abs(x), nabs_);
    }
}

double BesselTable::operator()(int n) const {
    const int m = std::abs(n);
    if (m > nabs_) throw std::out_of_range("BesselTable: order outside table");
    double v = pos_[m];
    const bool odd = (m % 2) != 0;
    if (odd && n < 0) v = -v;
    if (odd && x_ < 0.0) v = -v;
    return v;
}

double ordinary_bessel(int n, double x) {
    check_range(n, x);
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    return BesselTable(x, n, n)(n);
}

double bessel_quadrature(int n, double x, int points) {
    check_range(n, x);
    int m = 2 * (std::abs(n) + static_cast<int>(std::ceil(std::abs(x)))) + 64;
    m = std::max(m, points);
    m += m % 2;
    double s = 0.0;
    for (int j = 0; j < m; ++j) {
        const double t = -kPi + 2.0 * kPi * j / m;
        s += std::cos(x * std::sin(t) - n * t);
    }
    return s / m;
}

}  // namespace ati::specfun
