#include "arte/angular.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

#include "arte/errors.hpp"
#include "arte/gauss_legendre.hpp"

namespace arte {

double henyey_greenstein(double g, double mu) {
    return (1.0 - g * g) / std::pow(1.0 + g * g - 2.0 * g * mu, 1.5);
}

QuadratureSet build_quadrature(int order) {
    if (order < 2 || order > 24 || order % 2 != 0) {
        throw ConfigError(fmt::format("quadrature order must be even in [2, 24], got {}", order));
    }
    const GaussRule rule = gauss_legendre(order);

    // Positive polar levels, pole first. The level closest to the pole carries one
    // azimuth per quadrant, the next two, and so on.
    struct Level {
        double zeta;
        double weight;
    };
    std::vector<Level> levels;
    for (int i = 0; i < order; ++i) {
        if (rule.nodes[i] > 0.0) levels.push_back({rule.nodes[i], rule.weights[i]});
    }
    std::ranges::sort(levels, [](const Level& a, const Level& b) { return a.zeta > b.zeta; });

    constexpr double half_pi = std::numbers::pi / 2.0;
    constexpr int quadrant_sign[4][2] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};

    QuadratureSet quad;
    quad.order = order;
    quad.per_quadrant = order * (order + 2) / 8;
    for (int q = 0; q < 4; ++q) {
        for (std::size_t lev = 0; lev < levels.size(); ++lev) {
            const int n_az = static_cast<int>(lev) + 1;
            const double radius = std::sqrt(1.0 - levels[lev].zeta * levels[lev].zeta);
            for (int a = 0; a < n_az; ++a) {
                const double local = (a + 0.5) * half_pi / n_az;
                const double cx = quadrant_sign[q][0] * radius * std::cos(local);
                const double sy = quadrant_sign[q][1] * radius * std::sin(local);
                double theta = std::atan2(sy, cx);
                if (theta < 0.0) theta += 2.0 * std::numbers::pi;
                quad.directions.push_back({cx, sy, levels[lev].zeta, theta});
                quad.weights.push_back(levels[lev].weight / n_az);
            }
        }
    }
    double total = 0.0;
    for (double w : quad.weights) total += w;
    for (double& w : quad.weights) w /= total;
    return quad;
}

Eigen::MatrixXd raw_kernel(const QuadratureSet& quad, double g) {
    const int n = quad.size();
    Eigen::MatrixXd k(n, n);
    for (int m = 0; m < n; ++m) {
        for (int j = 0; j < n; ++j) {
            const auto& a = quad.directions[m];
            const auto& b = quad.directions[j];
            k(m, j) = henyey_greenstein(g, a.c * b.c + a.s * b.s);
        }
    }
    return k;
}

ScatterKernel build_kernel(const QuadratureSet& quad, double g) {
    if (!(std::abs(g) < 1.0)) {
        throw ConfigError(fmt::format("anisotropy factor must satisfy |g| < 1, got {}", g));
    }
    ScatterKernel kernel;
    kernel.g = g;
    kernel.entries = raw_kernel(quad, g);
    if (g == 0.0) return kernel;

    // Symmetric Sinkhorn scaling: find d > 0 with d_m sum_n k_mn w_n d_n = 1.
    const int n = quad.size();
    const Eigen::Map<const Eigen::VectorXd> w(quad.weights.data(), n);
    Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
    for (int it = 0; it < 10000; ++it) {
        const Eigen::VectorXd row = kernel.entries * w.cwiseProduct(d);
        const Eigen::VectorXd defect = d.cwiseProduct(row).array() - 1.0;
        if (defect.cwiseAbs().maxCoeff() < 1e-15) break;
        d = (d.array() / row.array()).sqrt();
    }
    kernel.entries = d.asDiagonal() * kernel.entries * d.asDiagonal();
    // Symmetrize away round-off from the two-sided product.
    kernel.entries = 0.5 * (kernel.entries + kernel.entries.transpose()).eval();
    return kernel;
}

void write_quadrature_csv(std::ostream& out, const QuadratureSet& quad) {
    out << "m,c,s,zeta,theta,weight\n";
    for (int m = 0; m < quad.size(); ++m) {
        const auto& d = quad.directions[m];
        out << fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", m + 1, d.c, d.s, d.zeta,
                           d.theta, quad.weights[m]);
    }
}

std::vector<int> inflow_ordinates(const QuadratureSet& quad, double nx, double ny) {
    std::vector<int> rows;
    for (int m = 0; m < quad.size(); ++m) {
        const auto& d = quad.directions[m];
        if (d.c * nx + d.s * ny < 0.0) rows.push_back(m);
    }
    return rows;
}

}  // namespace arte
