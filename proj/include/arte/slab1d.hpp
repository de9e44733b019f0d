#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace arte::slab {

/// Constant-coefficient slab problem on [z_l, z_r] with 2M Gauss-Legendre
/// ordinates and isotropic scattering.
struct SlabProblem {
    double sigma_t = 1.0;
    double sigma_s = 0.0;
    double q = 0.0;
    double z_l = 0.0;
    double z_r = 1.0;
    int M = 1;
    std::vector<double> inflow_left;   // psi at z_l for mu > 0, length M, ascending mu
    std::vector<double> inflow_right;  // psi at z_r for mu < 0, length M, ascending mu
};

/// Ordinates (ascending) and weights normalized to sum one.
struct SlabOrdinates {
    Eigen::VectorXd mu;
    Eigen::VectorXd weight;
};

SlabOrdinates slab_ordinates(int M);

/// Eigenpairs of U^{-1}[gamma 1 w^T - I], ascending, unit infinity norm.
/// The first M have lambda < 0 and are anchored at z_l, the rest at z_r.
struct SlabBasis {
    int M = 0;
    SlabOrdinates ordinates;
    Eigen::VectorXd lambda;
    Eigen::MatrixXd xi;
};

SlabBasis slab_eigenbasis(int M, double gamma);

/// Basis coefficients plus everything needed to evaluate the field.
struct SlabSolution {
    SlabProblem problem;
    SlabBasis basis;
    Eigen::VectorXd alpha;
    std::vector<bool> active;  // all true for the full solution

    /// Angular flux over the 2M ordinates at z.
    Eigen::VectorXd psi(double z) const;
    /// Weighted scalar flux sum_m w_m psi_m(z).
    double phi(double z) const;
    int retained() const;
};

/// Imposes the 2M inflow conditions and solves the dense system.
SlabSolution solve_slab(const SlabProblem& problem);

/// Drops basis k with exp(-|lambda_k| sigma_t (z_r - z_l) / 2) <= delta,
/// keeping the coefficients of the rest.
SlabSolution truncate_slab(const SlabSolution& full, double delta);

/// CSV `z,phi,phi_delta_<d>...` on `samples` equispaced points.
void write_truncation_csv(std::ostream& out, const SlabSolution& full, const std::vector<double>& deltas,
                          int samples = 1001);

}  // namespace arte::slab
