#include "arte/slab1d.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "arte/errors.hpp"
#include "arte/gauss_legendre.hpp"

namespace arte::slab {

SlabOrdinates slab_ordinates(int M) {
    if (M < 1 || M > 64) throw ConfigError(fmt::format("slab M must be in [1, 64], got {}", M));
    const GaussRule rule = gauss_legendre(2 * M);
    SlabOrdinates out;
    out.mu = Eigen::Map<const Eigen::VectorXd>(rule.nodes.data(), 2 * M);
    out.weight = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), 2 * M);
    out.weight /= out.weight.sum();
    return out;
}

SlabBasis slab_eigenbasis(int M, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw DegenerateMedium(fmt::format("slab gamma must be in [0, 1), got {}", gamma));
    SlabBasis basis;
    basis.M = M;
    basis.ordinates = slab_ordinates(M);
    const int n = 2 * M;
    const auto& mu = basis.ordinates.mu;
    const auto& w = basis.ordinates.weight;

    Eigen::MatrixXd mat = gamma * Eigen::VectorXd::Ones(n) * w.transpose() - Eigen::MatrixXd::Identity(n, n);
    for (int m = 0; m < n; ++m) mat.row(m) /= mu(m);

    Eigen::EigenSolver<Eigen::MatrixXd> solver(mat, true);
    const Eigen::VectorXcd values = solver.eigenvalues();
    const double scale = values.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
        if (std::abs(values(i).imag()) > 1e-8 * scale) {
            throw NonRealSpectrum(fmt::format("slab eigenvalue {}+{}i is not real", values(i).real(), values(i).imag()));
        }
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](int a, int b) { return values(a).real() < values(b).real(); });

    basis.lambda.resize(n);
    basis.xi.resize(n, n);
    for (int c = 0; c < n; ++c) {
        basis.lambda(c) = values(order[c]).real();
        Eigen::VectorXd v = solver.eigenvectors().col(order[c]).real();
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        basis.xi.col(c) = v / v(peak);
    }
    if ((basis.lambda.array() < 0.0).count() != M) {
        throw NumericalError("SpectrumSplit", "slab spectrum does not split M/M");
    }
    return basis;
}

namespace {
double anchor(const SlabProblem& p, int k, int M) { return k < M ? p.z_l : p.z_r; }
}  // namespace

Eigen::VectorXd SlabSolution::psi(double z) const {
    const int n = 2 * basis.M;
    Eigen::VectorXd out = Eigen::VectorXd::Constant(n, problem.q / (problem.sigma_t - problem.sigma_s));
    for (int k = 0; k < n; ++k) {
        if (!active[k]) continue;
        const double e = std::exp(basis.lambda(k) * problem.sigma_t * (z - anchor(problem, k, basis.M)));
        out += alpha(k) * e * basis.xi.col(k);
    }
    return out;
}

double SlabSolution::phi(double z) const { return basis.ordinates.weight.dot(psi(z)); }

int SlabSolution::retained() const { return static_cast<int>(std::ranges::count(active, true)); }

SlabSolution solve_slab(const SlabProblem& problem) {
    if (!(problem.sigma_t > problem.sigma_s) || problem.sigma_s < 0.0) {
        throw DegenerateMedium("slab problem needs sigma_t > sigma_s >= 0");
    }
    if (!(problem.z_l < problem.z_r)) throw ConfigError("slab problem needs z_l < z_r");
    const int M = problem.M;
    if (static_cast<int>(problem.inflow_left.size()) != M || static_cast<int>(problem.inflow_right.size()) != M) {
        throw ConfigError("slab inflow vectors must have length M");
    }
    SlabSolution sol;
    sol.problem = problem;
    sol.basis = slab_eigenbasis(M, problem.sigma_s / problem.sigma_t);
    const int n = 2 * M;
    const double special = problem.q / (problem.sigma_t - problem.sigma_s);
    const auto& mu = sol.basis.ordinates.mu;

    // Rows: psi_m(z_l) for mu_m > 0 (indices M..2M-1), then psi_m(z_r) for mu_m < 0.
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd b(n);
    int row = 0;
    for (int m = 0; m < n; ++m) {
        if (!(mu(m) > 0.0)) continue;
        for (int k = 0; k < n; ++k) {
            a(row, k) = sol.basis.xi(m, k) * std::exp(sol.basis.lambda(k) * problem.sigma_t * (problem.z_l - anchor(problem, k, M)));
        }
        b(row++) = problem.inflow_left[m - M] - special;
    }
    for (int m = 0; m < n; ++m) {
        if (!(mu(m) < 0.0)) continue;
        for (int k = 0; k < n; ++k) {
            a(row, k) = sol.basis.xi(m, k) * std::exp(sol.basis.lambda(k) * problem.sigma_t * (problem.z_r - anchor(problem, k, M)));
        }
        b(row++) = problem.inflow_right[m] - special;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) throw SingularMatrix("slab boundary system is singular", -1);
    sol.alpha = lu.solve(b);
    sol.active.assign(n, true);
    return sol;
}

SlabSolution truncate_slab(const SlabSolution& full, double delta) {
    SlabSolution out = full;
    if (delta <= 0.0) return out;
    const double half = 0.5 * (full.problem.z_r - full.problem.z_l) * full.problem.sigma_t;
    for (int k = 0; k < 2 * full.basis.M; ++k) {
        out.active[k] = std::exp(-std::abs(full.basis.lambda(k)) * half) > delta;
    }
    return out;
}

void write_truncation_csv(std::ostream& out, const SlabSolution& full, const std::vector<double>& deltas, int samples) {
    std::vector<SlabSolution> cut;
    out << "z,phi";
    for (double d : deltas) {
        out << fmt::format(",phi_delta_{:g}", d);
        cut.push_back(truncate_slab(full, d));
    }
    out << '\n';
    const double zl = full.problem.z_l;
    const double zr = full.problem.z_r;
    for (int s = 0; s < samples; ++s) {
        const double z = samples == 1 ? zl : zl + (zr - zl) * s / (samples - 1);
        out << fmt::format("{:.17g},{:.17g}", z, full.phi(z));
        for (const auto& c : cut) out << fmt::format(",{:.17g}", c.phi(z));
        out << '\n';
    }
}

}  // namespace arte::slab
