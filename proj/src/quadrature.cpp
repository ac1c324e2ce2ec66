#include "ati/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "ati/constants.hpp"

namespace ati {

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        if (n == 1) pp = 1.0, z = 0.0;
        const double w = n == 1 ? 2.0 : 2.0 / ((1.0 - z * z) * pp * pp);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    return r;
}

GaussRule composite_gauss(double a, double b, int panels, int per_panel) {
    if (panels < 1) throw std::invalid_argument("composite_gauss: panels must be positive");
    const GaussRule g = gauss_legendre(per_panel);
    GaussRule r;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int i = 0; i < per_panel; ++i) {
            r.x.push_back(lo + 0.5 * h * (g.x[i] + 1.0));
            r.w.push_back(0.5 * h * g.w[i]);
        }
    }
    return r;
}

}  // namespace ati
