#pragma once

#include <vector>

namespace arte {

struct GaussRule {
    std::vector<double> nodes;    // ascending on [-1, 1]
    std::vector<double> weights;  // sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1], Newton iteration on P_n.
GaussRule gauss_legendre(int n);

}  // namespace arte
