#include <array>
#include <cmath>
#include <stdexcept>

#include "ati/constants.hpp"
#include "ati/specfun.hpp"

namespace ati::specfun {

namespace {

constexpr double kAi0 = 0.355028053887817239260;
constexpr double kAip0 = -0.258819403792806798405;

constexpr double kSeriesEdge = 2.0;
constexpr double kAsymEdge = 9.0;
constexpr double kNodeStep = 0.25;
constexpr int kNodes = 29;  // (9 - 2) / 0.25 + 1

AiryValue maclaurin(double x) {
    const double x3 = x * x * x;
    const double x2 = x * x;
    // f = sum u_k, g = sum v_k; Ai = Ai(0) f + Ai'(0) g
    double u = 1.0, v = x;
    double f = u, g = v;
    double fp = 0.0, gp = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double du = u * x2 / (3.0 * k - 1.0);
        const double dv = v * x2 / (3.0 * k);
        u *= x3 / ((3.0 * k - 1.0) * (3.0 * k));
        v *= x3 / ((3.0 * k) * (3.0 * k + 1.0));
        f += u;
        g += v;
        fp += du;
        gp += dv;
        if (std::abs(u) < 1e-18 * std::abs(f) && std::abs(v) < 1e-18 * (std::abs(g) + 1e-300) &&
            std::abs(du) < 1e-18 * (std::abs(fp) + 1e-300))
            break;
    }
    return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

// Coefficients u_k of the large-argument expansions.
double next_u(double uk, int k) {
    return uk * (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
}

AiryValue asymptotic_positive(double x) {
    const double sx = std::sqrt(x);
    const double zeta = 2.0 / 3.0 * x * sx;
    const double q = std::sqrt(sx);  // x^{1/4}
    double uk = 1.0;
    double sa = 1.0, sd = 1.0;
    double t = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        uk = next_u(uk, k);
        const double vk = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * uk;
        t /= -zeta;
        const double ta = uk * t;
        if (std::abs(ta) > last) break;
        last = std::abs(ta);
        sa += ta;
        sd += vk * t;
        if (last < 1e-18) break;
    }
    const double e = std::exp(-zeta) / (2.0 * std::sqrt(kPi));
    return {e / q * sa, -e * q * sd};
}

AiryValue asymptotic_negative(double x) {
    const double z = -x;
    const double sz = std::sqrt(z);
    const double zeta = 2.0 / 3.0 * z * sz;
    const double q = std::sqrt(sz);
    // P = sum (-1)^k u_2k / zeta^2k, Q = sum (-1)^k u_2k+1 / zeta^2k+1 (same for v)
    double pu = 1.0, qu = 0.0, pv = 1.0, qv = 0.0;
    double uk = 1.0;
    double t = 1.0;
    double last = 1.0;
    for (int k = 1; k < 200; ++k) {
        uk = next_u(uk, k);
        const double vk = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * uk;
        t /= zeta;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        const double ta = uk * t;
        if (std::abs(ta) > last) break;
        last = std::abs(ta);
        if (k % 2 == 0) {
            pu += sign * ta;
            pv += sign * vk * t;
        } else {
            qu += sign * ta;
            qv += sign * vk * t;
        }
        if (last < 1e-18) break;
    }
    const double c = std::cos(zeta - kPi / 4.0);
    const double s = std::sin(zeta - kPi / 4.0);
    const double rp = 1.0 / std::sqrt(kPi);
    return {rp / q * (c * pu + s * qu), rp * q * (s * pv - c * qv)};
}

// One Taylor step of Ai'' = x Ai from x0 to x0 + h.
AiryValue taylor_step(double x0, AiryValue y0, double h) {
    if (h == 0.0) return y0;
    double am1 = 0.0;  // a_{k-1}
    double a0 = y0.ai;
    double a1 = y0.aip;
    double y = a0 + a1 * h;
    double yp = a1;
    double hk = h;  // h^k for a_{k}, k = 1
    int quiet = 0;
    for (int k = 0; k < 300; ++k) {
        // a_{k+2} from a_k and a_{k-1}
        const double a2 = (x0 * a0 + am1) / ((k + 2.0) * (k + 1.0));
        const double termd = (k + 2.0) * a2 * hk;
        hk *= h;
        const double term = a2 * hk;
        y += term;
        yp += termd;
        am1 = a0;
        a0 = a1;
        a1 = a2;
        const double scale = std::abs(y) + std::abs(yp) + 1e-300;
        quiet = (std::abs(term) + std::abs(termd) < 1e-18 * scale) ? quiet + 1 : 0;
        if (quiet >= 3) break;
    }
    return {y, yp};
}

struct NodeTables {
    std::array<AiryValue, kNodes> pos;  // x = 2 + j * step
    std::array<AiryValue, 37> neg;      // x = -j * step, j = 0..36
    NodeTables() {
        pos[kNodes - 1] = asymptotic_positive(kAsymEdge);
        for (int j = kNodes - 2; j >= 0; --j)
            pos[j] = taylor_step(kSeriesEdge + (j + 1) * kNodeStep, pos[j + 1], -kNodeStep);
        neg[0] = {kAi0, kAip0};
        for (int j = 1; j < 37; ++j) neg[j] = taylor_step(-(j - 1) * kNodeStep, neg[j - 1], -kNodeStep);
    }
};

const NodeTables& tables() {
    static const NodeTables t;
    return t;
}

}  // namespace

AiryValue airy(double x) {
    if (std::isnan(x)) return {x, x};
    if (std::abs(x) <= kSeriesEdge) return maclaurin(x);
    if (x >= kAsymEdge) return asymptotic_positive(x);
    if (x <= -kAsymEdge) return asymptotic_negative(x);
    const NodeTables& t = tables();
    if (x > 0.0) {
        // step backwards from the node above, the stable direction for Ai
        const int j = static_cast<int>(std::ceil((x - kSeriesEdge) / kNodeStep));
        const double xj = kSeriesEdge + j * kNodeStep;
        return taylor_step(xj, t.pos[j], x - xj);
    }
    const int j = static_cast<int>(std::lround(-x / kNodeStep));
    const double xj = -j * kNodeStep;
    return taylor_step(xj, t.neg[j], x - xj);
}

double airy_ai(double x) { return airy(x).ai; }

double airy_ai_asymptotic(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("airy_ai_asymptotic: x must be positive");
    return std::pow(x, -0.25) * std::exp(-2.0 * x * std::sqrt(x) / 3.0) / (2.0 * std::sqrt(kPi));
}

double bessel_airy_approx(int n, double x) {
    if (n < 1) throw std::invalid_argument("bessel_airy_approx: N must be >= 1");
    if (!(x >= 0.0)) throw std::invalid_argument("bessel_airy_approx: x must be >= 0");
    const double nn = n;
    const double r = x / nn;
    return std::cbrt(2.0 / nn) * airy_ai(std::pow(nn / 2.0, 2.0 / 3.0) * (1.0 - r) * (1.0 + r));
}

}  // namespace ati::specfun
