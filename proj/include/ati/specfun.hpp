#pragma once

#include <complex>
#include <vector>

namespace ati::specfun {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 100000;
inline constexpr double kMaxArgument = 1e5;

struct SeriesControl {
    double rel_tol = 1e-16;
    double abs_floor = 1e-12;
    int max_terms = 200000;
    int quad_points = 64;  // lower bound; the oracle raises it as needed

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

// Order and arguments of J_n(u, v, delta); delta is reduced to (-pi, pi].
struct GenBesselArgs {
    GenBesselArgs(int n, double u, double v, double delta);
    int n;
    double u;
    double v;
    double delta;
};

double ordinary_bessel(int n, double x);

// J_n(x) for every n in [n_lo, n_hi] from a single downward recurrence.
class BesselTable {
public:
    BesselTable(double x, int n_lo, int n_hi);
    double operator()(int n) const;
    double x() const { return x_; }
    int lo() const { return lo_; }
    int hi() const { return hi_; }

private:
    double x_;
    int lo_;
    int hi_;
    int nabs_;
    std::vector<double> pos_;  // J_0..J_nabs(|x|)
};

// Evaluates J_n(u, v, delta) for many n with the same (u, v, delta),
// sharing the ordinary Bessel tables between orders.
class GenBesselSeries {
public:
    GenBesselSeries(double u, double v, double delta, int n_lo, int n_hi,
                    const SeriesControl& ctrl = {});
    cplx operator()(int n) const;
    // Number of k terms kept on each side of the series.
    int terms() const { return k_; }

private:
    double delta_;
    int n_lo_;
    int n_hi_;
    int k_;
    std::vector<double> jv_;  // J_k(v), k in [-k_, k_]
    std::vector<double> ju_;  // J_m(u), m in [n_lo_ - 2k_, n_hi_ + 2k_]
    int ju_lo_;
    std::vector<cplx> phase_;  // e^{-2ik delta}
};

cplx gen_bessel(int n, double u, double v, double delta, const SeriesControl& ctrl = {});
cplx gen_bessel(const GenBesselArgs& a, const SeriesControl& ctrl = {});

// Real generalized Bessel J_n(u, v) = J_n(u, v, 0); throws if the series
// leaves an imaginary part above abs_floor.
double gen_bessel_real(int n, double u, double v, const SeriesControl& ctrl = {});

// Trapezoid-rule evaluation of the integral definition; independent oracle.
cplx gen_bessel_quadrature(int n, double u, double v, double delta,
                           const SeriesControl& ctrl = {});
int quadrature_nodes(int n, double u, double v, const SeriesControl& ctrl = {});

// Oracle for the ordinary Bessel function (integral representation).
double bessel_quadrature(int n, double x, int points = 0);

struct AiryValue {
    double ai;
    double aip;
};

AiryValue airy(double x);
double airy_ai(double x);
// Leading-order asymptotic form x^{-1/4} exp(-2 x^{3/2}/3) / (2 sqrt(pi)).
double airy_ai_asymptotic(double x);

// J_N(x) ~ (2/N)^{1/3} Ai[(N/2)^{2/3} (1 - x^2/N^2)]
double bessel_airy_approx(int n, double x);

}  // namespace ati::specfun
