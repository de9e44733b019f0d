#include "arte/linsolve.hpp"

#include <cmath>
#include <regex>
#include <string>

#include <fmt/format.h>

#include "arte/errors.hpp"
#include "arte/log.hpp"

namespace arte {

namespace {
long failing_pivot(const std::string& message) {
    static const std::regex trailing(R"((\d+)\s*$)");
    std::smatch m;
    return std::regex_search(message, m, trailing) ? std::stol(m[1]) : -1;
}

double inf_norm(const Factorization::Matrix& a) {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(a.rows());
    for (int k = 0; k < a.outerSize(); ++k) {
        for (Factorization::Matrix::InnerIterator it(a, k); it; ++it) rows(it.row()) += std::abs(it.value());
    }
    return rows.size() ? rows.maxCoeff() : 0.0;
}
}  // namespace

Factorization::Factorization(const Matrix& a) : a_(a) {
    if (a.rows() != a.cols()) throw CountMismatch(fmt::format("matrix is {}x{}, not square", a.rows(), a.cols()));
    a_.makeCompressed();
    norm_inf_ = inf_norm(a_);
    lu_ = std::make_unique<Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(a_);
    lu_->factorize(a_);
    if (lu_->info() != Eigen::Success) {
        const std::string msg = lu_->lastErrorMessage();
        throw SingularMatrix(fmt::format("sparse LU failed: {}", msg), failing_pivot(msg));
    }
    fill_ = static_cast<long>(lu_->nnzL() + lu_->nnzU());
}

double Factorization::residual(const Eigen::VectorXd& x, const Eigen::VectorXd& b) const {
    const double denom = norm_inf_ * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
    const double r = (a_ * x - b).lpNorm<Eigen::Infinity>();
    return denom > 0.0 ? r / denom : r;
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const {
    if (b.size() != size()) throw CountMismatch(fmt::format("rhs has length {}, expected {}", b.size(), size()));
    Eigen::VectorXd x = lu_->solve(b);
    for (int step = 0; step < 3 && residual(x, b) > 1e-10; ++step) x += lu_->solve(b - a_ * x);
    if (!x.allFinite()) throw SingularMatrix("sparse LU produced a non-finite solution", -1);
    const double r = residual(x, b);
    if (r > 1e-10) log().warn("relative residual {:.3g} above 1e-10 after refinement", r);
    return x;
}

Eigen::VectorXd Factorization::solve_transpose(const Eigen::VectorXd& b) const {
    return lu_->transpose().solve(b);
}

InverseNormEstimate inv_inf_norm_estimate(const Factorization& fact, int max_probes) {
    const Eigen::Index n = fact.size();
    InverseNormEstimate est;
    if (n == 0) return est;
    // ||A^{-1}||_inf = ||B||_1 with B = A^{-T}; B x is a transpose solve and
    // B^T x an ordinary solve.
    Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Eigen::Index last = -1;
    for (int it = 0; it < max_probes; ++it) {
        const Eigen::VectorXd y = fact.solve_transpose(x);
        ++est.probes;
        est.value = std::max(est.value, y.lpNorm<1>());
        const Eigen::VectorXd xi = y.unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; });
        const Eigen::VectorXd w = fact.solve(xi);  // B^T xi
        Eigen::Index j = 0;
        const double top = w.cwiseAbs().maxCoeff(&j);
        if (top <= w.dot(x) || j == last) break;
        last = j;
        x.setZero();
        x(j) = 1.0;
    }
    // Higham's extra alternating-sign probe.
    Eigen::VectorXd alt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        alt(i) = (i % 2 == 0 ? 1.0 : -1.0) * (1.0 + (n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0));
    }
    est.value = std::max(est.value, 2.0 * fact.solve_transpose(alt).lpNorm<1>() / (3.0 * static_cast<double>(n)));
    ++est.probes;
    return est;
}

}  // namespace arte
