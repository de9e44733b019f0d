#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include <Eigen/Dense>

#include "arte/angular.hpp"
#include "arte/mesh.hpp"

namespace arte {

/// Cell-averaged optical coefficients.
struct CellMedium {
    double sigma_t = 1.0;  // total cross section
    double sigma_s = 0.0;  // scattering cross section
    double g = 0.0;        // HG anisotropy
    double q = 0.0;        // isotropic source density

    double sigma_a() const { return sigma_t - sigma_s; }
    double gamma() const { return sigma_s / sigma_t; }

    friend bool operator==(const CellMedium&, const CellMedium&) = default;
};

/// Throws DegenerateMedium unless sigma_t > 0, 0 <= sigma_s < sigma_t and |g| < 1.
void validate(const CellMedium& medium);

/// Eigenpairs of one family, ascending eigenvalues, one eigenvector per column.
struct EigenFamily {
    Eigen::VectorXd lambda;
    Eigen::MatrixXd xi;
    double condition = 0.0;  // 2-norm condition number of xi
};

/// Geometry-independent part of a cell basis; shared by all cells with the
/// same (sigma_t, sigma_s, g).
struct MediumSpectrum {
    int M = 0;
    double sigma_t = 0.0;
    EigenFamily x;  // M^x = D^{-1}[gamma K W - I]
    EigenFamily y;  // M^y = S^{-1}[gamma K W - I]
};

/// Eigen-decomposition of both TFPS matrices for one medium.
///
/// Each family has exactly 2M negative and 2M positive eigenvalues, every
/// eigenvector has unit infinity norm with its largest-magnitude entry
/// positive, and vectors sharing a numerically repeated eigenvalue are
/// orthogonalized before normalization.
MediumSpectrum compute_spectrum(const QuadratureSet& quad, const ScatterKernel& kernel,
                                const CellMedium& medium);

/// The 8M exponential basis functions of a single cell.
///
/// Index k (0-based): [0, 2M) x-family with lambda < 0 anchored at xl,
/// [2M, 4M) lambda > 0 anchored at xr, [4M, 6M) y-family lambda < 0 anchored
/// at yb, [6M, 8M) lambda > 0 anchored at yt.
class CellBasis {
public:
    CellBasis() = default;
    CellBasis(std::shared_ptr<const MediumSpectrum> spectrum, CellGeometry geometry);

    int M() const { return spectrum_->M; }
    int size() const { return 8 * spectrum_->M; }
    int directions() const { return 4 * spectrum_->M; }
    double sigma_t() const { return spectrum_->sigma_t; }
    const CellGeometry& geometry() const { return geometry_; }
    const MediumSpectrum& spectrum() const { return *spectrum_; }

    bool x_family(int k) const { return k < 4 * M(); }
    double lambda(int k) const;
    Eigen::MatrixXd::ConstColXpr xi(int k) const;
    Side anchor(int k) const { return anchor_side(k, M()); }
    double anchor_coordinate(int k) const;

    /// Scalar exponential factor of basis k at a point.
    double zeta(int k, double x, double y) const;
    /// zeta at the cell center: exp(-|lambda| sigma_t h / 2).
    double zeta_center(int k) const;
    /// zeta at the midpoint of `edge`, using exact multiples of the cell width.
    double zeta_edge(int k, Side edge) const;

private:
    std::shared_ptr<const MediumSpectrum> spectrum_;
    CellGeometry geometry_;
};

CellBasis cell_eigenbasis(const QuadratureSet& quad, const ScatterKernel& kernel,
                          const CellMedium& medium, const CellGeometry& geometry);

/// Value of basis function k at (x, y), a vector over the 4M ordinates.
Eigen::VectorXd eval_basis(const CellBasis& basis, int k, double x, double y);

/// Constant particular solution q / sigma_a.
double special_solution(const CellMedium& medium);

/// Memoizes spectra (and kernels) by (sigma_t, sigma_s, g) for one quadrature.
/// Safe for concurrent use; racing inserts of the same key are idempotent.
class BasisCache {
public:
    explicit BasisCache(const QuadratureSet& quad) : quad_(quad) {}

    std::shared_ptr<const MediumSpectrum> spectrum(const CellMedium& medium);
    std::shared_ptr<const ScatterKernel> kernel(double g);
    std::size_t size() const;

private:
    const QuadratureSet& quad_;
    mutable std::mutex mutex_;
    std::map<std::tuple<double, double, double>, std::shared_ptr<const MediumSpectrum>> spectra_;
    std::map<double, std::shared_ptr<const ScatterKernel>> kernels_;
};

/// CSV `family,k,lambda,xi_1..xi_4M`, k 1-based over 1..8M.
void write_eigen_csv(std::ostream& out, const MediumSpectrum& spectrum);

}  // namespace arte
