#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace arte {

/// Discrete direction in x-y geometry: projection of a unit vector on the
/// upper hemisphere onto the plane.
struct Direction {
    double c = 0.0;      // x-component
    double s = 0.0;      // y-component
    double zeta = 0.0;   // polar cosine of the 3D direction, [0, 1)
    double theta = 0.0;  // azimuth, [0, 2*pi)
};

/// S_N set in x-y geometry with 4M = N(N+2)/2 directions and weights
/// summing to one.
///
/// Directions are stored quadrant-major in the order (+,+), (-,+), (-,-),
/// (+,-); inside a quadrant by polar level (pole first) then azimuth.
struct QuadratureSet {
    int order = 0;         // N
    int per_quadrant = 0;  // M
    std::vector<Direction> directions;
    std::vector<double> weights;

    int size() const { return static_cast<int>(directions.size()); }
};

/// Henyey-Greenstein phase function evaluated at cosine `mu` of the angle
/// between two directions.
double henyey_greenstein(double g, double mu);

/// Scattering matrix kappa_{mn} over a quadrature set.
///
/// Symmetric, strictly positive and discretely normalized:
/// sum_n kappa_{mn} w_n = 1 for every m.
struct ScatterKernel {
    double g = 0.0;
    Eigen::MatrixXd entries;
};

/// Level-symmetric triangular S_N layout. N must be even, 2 <= N <= 24.
QuadratureSet build_quadrature(int order);

/// Raw HG values at u_m . u_n, without normalization.
Eigen::MatrixXd raw_kernel(const QuadratureSet& quad, double g);

/// HG kernel with symmetric diagonal scaling D K D chosen so every
/// weighted row sum equals one. |g| < 1.
ScatterKernel build_kernel(const QuadratureSet& quad, double g);

/// CSV `m,c,s,zeta,theta,weight` with 17 significant digits, m 1-based.
void write_quadrature_csv(std::ostream& out, const QuadratureSet& quad);

/// Ordinates m with u_m . n < 0 for outward normal n = (nx, ny), ascending.
std::vector<int> inflow_ordinates(const QuadratureSet& quad, double nx, double ny);

}  // namespace arte
