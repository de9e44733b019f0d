#include "arte/local_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "arte/errors.hpp"

namespace arte {

void validate(const CellMedium& medium) {
    if (!(medium.sigma_t > 0.0) || !std::isfinite(medium.sigma_t)) {
        throw DegenerateMedium(fmt::format("sigma_t must be positive, got {}", medium.sigma_t));
    }
    if (!(medium.sigma_s >= 0.0)) {
        throw DegenerateMedium(fmt::format("sigma_s must be nonnegative, got {}", medium.sigma_s));
    }
    if (!(medium.sigma_a() > 0.0)) {
        throw DegenerateMedium(fmt::format("sigma_a = sigma_t - sigma_s must be positive (sigma_t={}, sigma_s={})",
                                           medium.sigma_t, medium.sigma_s));
    }
    if (!(std::abs(medium.g) < 1.0)) {
        throw DegenerateMedium(fmt::format("|g| must be < 1, got {}", medium.g));
    }
    if (!std::isfinite(medium.q)) throw DegenerateMedium("source q is not finite");
}

namespace {

// First index of the largest-magnitude entry.
Eigen::Index dominant_entry(const Eigen::VectorXd& v) {
    Eigen::Index i = 0;
    v.cwiseAbs().maxCoeff(&i);
    return i;
}

EigenFamily decompose(const Eigen::MatrixXd& matrix, int M, const char* family) {
    const int n = static_cast<int>(matrix.rows());
    Eigen::EigenSolver<Eigen::MatrixXd> solver(matrix, true);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("EigenSolverFailure", fmt::format("{}-family eigensolver did not converge", family));
    }
    const Eigen::VectorXcd values = solver.eigenvalues();
    const Eigen::MatrixXcd vectors = solver.eigenvectors();
    const double scale = values.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
        if (std::abs(values(i).imag()) > 1e-8 * scale) {
            throw NonRealSpectrum(fmt::format("{}-family eigenvalue {}+{}i is not real", family,
                                              values(i).real(), values(i).imag()));
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](int a, int b) { return values(a).real() < values(b).real(); });

    EigenFamily out;
    out.lambda.resize(n);
    out.xi.resize(n, n);
    for (int c = 0; c < n; ++c) {
        out.lambda(c) = values(order[c]).real();
        out.xi.col(c) = vectors.col(order[c]).real();
    }

    // Orthogonalize inside clusters of numerically repeated eigenvalues.
    const double tie = 1e-10 * scale;
    for (int start = 0; start < n;) {
        int stop = start + 1;
        while (stop < n && out.lambda(stop) - out.lambda(stop - 1) <= tie) ++stop;
        for (int c = start; c < stop; ++c) {
            Eigen::VectorXd v = out.xi.col(c);
            for (int p = start; p < c; ++p) v -= out.xi.col(p).dot(v) * out.xi.col(p);
            out.xi.col(c) = v.normalized();
        }
        start = stop;
    }

    for (int c = 0; c < n; ++c) {
        Eigen::VectorXd v = out.xi.col(c);
        const Eigen::Index i = dominant_entry(v);
        v /= v(i);  // unit infinity norm, dominant entry +1
        out.xi.col(c) = v;
    }

    const int negative = static_cast<int>((out.lambda.array() < 0.0).count());
    const int zero = static_cast<int>((out.lambda.array() == 0.0).count());
    if (negative != 2 * M || zero != 0) {
        throw NumericalError("SpectrumSplit",
                             fmt::format("{}-family has {} negative eigenvalues, expected {}", family, negative, 2 * M));
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.xi);
    const auto& sv = svd.singularValues();
    out.condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
    return out;
}

}  // namespace

MediumSpectrum compute_spectrum(const QuadratureSet& quad, const ScatterKernel& kernel,
                                const CellMedium& medium) {
    validate(medium);
    const int n = quad.size();
    Eigen::MatrixXd core = medium.gamma() * kernel.entries;
    for (int j = 0; j < n; ++j) core.col(j) *= quad.weights[j];
    core -= Eigen::MatrixXd::Identity(n, n);

    Eigen::MatrixXd mx = core;
    Eigen::MatrixXd my = core;
    for (int m = 0; m < n; ++m) {
        mx.row(m) /= quad.directions[m].c;
        my.row(m) /= quad.directions[m].s;
    }
    MediumSpectrum spectrum;
    spectrum.M = quad.per_quadrant;
    spectrum.sigma_t = medium.sigma_t;
    spectrum.x = decompose(mx, quad.per_quadrant, "x");
    spectrum.y = decompose(my, quad.per_quadrant, "y");
    return spectrum;
}

CellBasis::CellBasis(std::shared_ptr<const MediumSpectrum> spectrum, CellGeometry geometry)
    : spectrum_(std::move(spectrum)), geometry_(geometry) {}

double CellBasis::lambda(int k) const {
    const int n = directions();
    return k < n ? spectrum_->x.lambda(k) : spectrum_->y.lambda(k - n);
}

Eigen::MatrixXd::ConstColXpr CellBasis::xi(int k) const {
    const int n = directions();
    return k < n ? spectrum_->x.xi.col(k) : spectrum_->y.xi.col(k - n);
}

double CellBasis::anchor_coordinate(int k) const {
    switch (anchor(k)) {
        case Side::Left: return geometry_.xl;
        case Side::Right: return geometry_.xr;
        case Side::Bottom: return geometry_.yb;
        case Side::Top: return geometry_.yt;
    }
    return 0.0;
}

double CellBasis::zeta(int k, double x, double y) const {
    const double coordinate = x_family(k) ? x : y;
    return std::exp(lambda(k) * sigma_t() * (coordinate - anchor_coordinate(k)));
}

double CellBasis::zeta_center(int k) const {
    return std::exp(-0.5 * std::abs(lambda(k)) * sigma_t() * geometry_.width());
}

double CellBasis::zeta_edge(int k, Side edge) const {
    const Side a = anchor(k);
    if (a == edge) return 1.0;
    if (a == opposite(edge)) return std::exp(-std::abs(lambda(k)) * sigma_t() * geometry_.width());
    return zeta_center(k);
}

CellBasis cell_eigenbasis(const QuadratureSet& quad, const ScatterKernel& kernel,
                          const CellMedium& medium, const CellGeometry& geometry) {
    return CellBasis(std::make_shared<const MediumSpectrum>(compute_spectrum(quad, kernel, medium)), geometry);
}

Eigen::VectorXd eval_basis(const CellBasis& basis, int k, double x, double y) {
    if (k < 0 || k >= basis.size()) {
        throw std::out_of_range(fmt::format("basis index {} outside [0, {})", k, basis.size()));
    }
    if (!basis.geometry().contains(x, y)) {
        throw ConfigError(fmt::format("point ({}, {}) lies outside the cell", x, y), "PointOutsideCell");
    }
    return basis.xi(k) * basis.zeta(k, x, y);
}

double special_solution(const CellMedium& medium) {
    if (!(medium.sigma_a() > 0.0)) {
        throw DegenerateMedium(fmt::format("special solution needs sigma_a > 0, got {}", medium.sigma_a()));
    }
    return medium.q / medium.sigma_a();
}

std::shared_ptr<const ScatterKernel> BasisCache::kernel(double g) {
    {
        std::lock_guard lock(mutex_);
        if (auto it = kernels_.find(g); it != kernels_.end()) return it->second;
    }
    auto built = std::make_shared<const ScatterKernel>(build_kernel(quad_, g));
    std::lock_guard lock(mutex_);
    return kernels_.try_emplace(g, std::move(built)).first->second;
}

std::shared_ptr<const MediumSpectrum> BasisCache::spectrum(const CellMedium& medium) {
    const auto key = std::make_tuple(medium.sigma_t, medium.sigma_s, medium.g);
    {
        std::lock_guard lock(mutex_);
        if (auto it = spectra_.find(key); it != spectra_.end()) return it->second;
    }
    const auto k = kernel(medium.g);
    auto built = std::make_shared<const MediumSpectrum>(compute_spectrum(quad_, *k, medium));
    std::lock_guard lock(mutex_);
    return spectra_.try_emplace(key, std::move(built)).first->second;
}

std::size_t BasisCache::size() const {
    std::lock_guard lock(mutex_);
    return spectra_.size();
}

void write_eigen_csv(std::ostream& out, const MediumSpectrum& spectrum) {
    const int n = 4 * spectrum.M;
    out << "family,k,lambda";
    for (int m = 1; m <= n; ++m) out << ",xi_" << m;
    out << '\n';
    auto dump = [&](const EigenFamily& fam, const char* name, int offset) {
        for (int c = 0; c < n; ++c) {
            out << fmt::format("{},{},{:.17g}", name, offset + c + 1, fam.lambda(c));
            for (int m = 0; m < n; ++m) out << fmt::format(",{:.17g}", fam.xi(m, c));
            out << '\n';
        }
    };
    dump(spectrum.x, "x", 0);
    dump(spectrum.y, "y", n);
}

}  // namespace arte
