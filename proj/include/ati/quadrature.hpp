#pragma once

#include <vector>

namespace ati {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1], ascending
    std::vector<double> w;
};

// Gauss-Legendre rule with n nodes (Newton iteration on P_n).
GaussRule gauss_legendre(int n);

// Composite rule on [a, b] with `panels` equal panels of `per_panel` nodes.
GaussRule composite_gauss(double a, double b, int panels, int per_panel);

}  // namespace ati
