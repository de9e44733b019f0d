#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "arte/assembly.hpp"
#include "arte/discretization.hpp"
#include "arte/reduction.hpp"

namespace arte {

/// Piecewise angular flux: per-cell basis coefficients plus the special
/// solution. Inactive basis functions carry coefficient zero.
struct SolutionField {
    const Discretization* disc = nullptr;
    std::vector<Eigen::VectorXd> coeffs;  // length 8M per cell
    std::vector<std::vector<char>> active;
    bool adaptive = false;
    double delta = 0.0;

    /// max |alpha| over active coefficients.
    double coeff_norm() const;
};

/// Scatters a solution vector back to cells through the system's column map.
SolutionField make_field(const Discretization& disc, const ColumnMap& columns, const Eigen::VectorXd& x,
                         bool adaptive = false, double delta = 0.0);

/// psi over the 4M ordinates at (x, y) in `cell`.
Eigen::VectorXd eval_field(const SolutionField& field, int cell, double x, double y);
/// psi at the cell center, using exact half-width exponents.
Eigen::VectorXd eval_center(const SolutionField& field, int cell);

/// Unweighted ordinate sum of psi at the cell center.
double scalar_flux(const SolutionField& field, int cell);
/// Quadrature-weighted sum of psi at the cell center.
double weighted_scalar_flux(const SolutionField& field, int cell);

/// max over cell centers and ordinates of |a - b|.
double error_metric(const SolutionField& a, const SolutionField& b);
/// max over cell centers and ordinates of |a|.
double field_norm(const SolutionField& a);
/// Selected over total basis count.
double ratio_metric(const SelectionResult& sel);

struct ProbeSample {
    double x = 0.0;
    double y = 0.0;
    double difference = 0.0;  // unweighted scalar flux a - b
};

/// Scalar-flux difference at n equispaced points of a segment in the domain.
std::vector<ProbeSample> line_probe(const SolutionField& a, const SolutionField& b, double x0, double y0, double x1,
                                    double y1, int n);

/// CSV `i,j,x_c,y_c,phi`.
void write_field_csv(std::ostream& out, const SolutionField& field);
/// CSV `i,j,m,psi_m`, m 1-based.
void write_psi_csv(std::ostream& out, const SolutionField& field);

}  // namespace arte
