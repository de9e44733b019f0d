#pragma once

#include <memory>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace arte {

/// Sparse LU factors (COLAMD column ordering, threshold partial pivoting)
/// of a square matrix, reusable across right-hand sides.
class Factorization {
public:
    using Matrix = Eigen::SparseMatrix<double>;

    /// Throws SingularMatrix with the failing pivot index.
    explicit Factorization(const Matrix& a);

    Eigen::Index size() const { return a_.rows(); }
    const Matrix& matrix() const { return a_; }
    /// Nonzeros in L + U.
    long fill() const { return fill_; }

    /// Solve with up to three steps of iterative refinement, stopping once
    /// ||Ax - b||_inf / (||A||_inf ||x||_inf + ||b||_inf) <= 1e-10.
    Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
    Eigen::VectorXd solve_transpose(const Eigen::VectorXd& b) const;
    /// Relative residual of the last solve measure above.
    double residual(const Eigen::VectorXd& x, const Eigen::VectorXd& b) const;

private:
    Matrix a_;
    double norm_inf_ = 0.0;
    long fill_ = 0;
    std::unique_ptr<Eigen::SparseLU<Matrix, Eigen::COLAMDOrdering<int>>> lu_;
};

struct InverseNormEstimate {
    double value = 0.0;  // lower bound on ||A^{-1}||_inf
    int probes = 0;      // number of solve pairs used
};

/// Hager-Higham estimate of ||A^{-1}||_inf = ||A^{-T}||_1 from the factors.
/// Never decreases as more probes are taken.
InverseNormEstimate inv_inf_norm_estimate(const Factorization& fact, int max_probes = 5);

}  // namespace arte
