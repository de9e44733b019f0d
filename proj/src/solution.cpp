#include "arte/solution.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "arte/errors.hpp"

namespace arte {

double SolutionField::coeff_norm() const {
    double n = 0.0;
    for (const auto& c : coeffs) n = std::max(n, c.size() ? c.cwiseAbs().maxCoeff() : 0.0);
    return n;
}

SolutionField make_field(const Discretization& disc, const ColumnMap& columns, const Eigen::VectorXd& x, bool adaptive,
                         double delta) {
    if (x.size() != columns.size) throw CountMismatch(fmt::format("solution has {} entries, expected {}", x.size(), columns.size));
    SolutionField field;
    field.disc = &disc;
    field.adaptive = adaptive;
    field.delta = delta;
    const int per_cell = 8 * disc.M();
    field.coeffs.assign(disc.cell_count(), Eigen::VectorXd::Zero(per_cell));
    field.active.assign(disc.cell_count(), std::vector<char>(per_cell, 0));
    for (int c = 0; c < disc.cell_count(); ++c) {
        for (int k = 0; k < per_cell; ++k) {
            const int col = columns.at(c, k);
            if (col < 0) continue;
            field.coeffs[c](k) = x(col);
            field.active[c][k] = 1;
        }
    }
    return field;
}

namespace {
template <class Zeta>
Eigen::VectorXd accumulate(const SolutionField& field, int cell, Zeta&& zeta) {
    const auto& basis = field.disc->bases[cell];
    Eigen::VectorXd psi = Eigen::VectorXd::Constant(basis.directions(), field.disc->source_ratio(cell));
    for (int k = 0; k < basis.size(); ++k) {
        if (!field.active[cell][k]) continue;
        psi += field.coeffs[cell](k) * zeta(k) * basis.xi(k);
    }
    return psi;
}
}  // namespace

Eigen::VectorXd eval_field(const SolutionField& field, int cell, double x, double y) {
    const auto& basis = field.disc->bases[cell];
    if (!basis.geometry().contains(x, y)) {
        throw ConfigError(fmt::format("point ({}, {}) lies outside cell {}", x, y, cell), "PointOutsideCell");
    }
    return accumulate(field, cell, [&](int k) { return basis.zeta(k, x, y); });
}

Eigen::VectorXd eval_center(const SolutionField& field, int cell) {
    const auto& basis = field.disc->bases[cell];
    return accumulate(field, cell, [&](int k) { return basis.zeta_center(k); });
}

double scalar_flux(const SolutionField& field, int cell) { return eval_center(field, cell).sum(); }

double weighted_scalar_flux(const SolutionField& field, int cell) {
    const auto psi = eval_center(field, cell);
    const auto& w = field.disc->quad.weights;
    return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())).dot(psi);
}

double error_metric(const SolutionField& a, const SolutionField& b) {
    if (a.disc->cell_count() != b.disc->cell_count() || a.disc->quad.size() != b.disc->quad.size()) {
        throw ConfigError("fields live on different discretizations", "ShapeMismatch");
    }
    double e = 0.0;
    for (int c = 0; c < a.disc->cell_count(); ++c) {
        e = std::max(e, (eval_center(a, c) - eval_center(b, c)).cwiseAbs().maxCoeff());
    }
    return e;
}

double field_norm(const SolutionField& a) {
    double e = 0.0;
    for (int c = 0; c < a.disc->cell_count(); ++c) e = std::max(e, eval_center(a, c).cwiseAbs().maxCoeff());
    return e;
}

double ratio_metric(const SelectionResult& sel) { return sel.ratio(); }

std::vector<ProbeSample> line_probe(const SolutionField& a, const SolutionField& b, double x0, double y0, double x1,
                                    double y1, int n) {
    auto inside = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!inside(x0) || !inside(y0) || !inside(x1) || !inside(y1)) {
        throw ConfigError("probe segment leaves the unit square", "SegmentOutsideDomain");
    }
    if (n < 1) throw ConfigError("probe needs at least one sample");
    std::vector<ProbeSample> out;
    out.reserve(n);
    const auto& mesh = a.disc->mesh;
    for (int s = 0; s < n; ++s) {
        const double t = n == 1 ? 0.0 : static_cast<double>(s) / (n - 1);
        const double x = x0 + t * (x1 - x0);
        const double y = y0 + t * (y1 - y0);
        const int cell = mesh.locate(x, y);
        const double d = eval_field(a, cell, x, y).sum() - eval_field(b, cell, x, y).sum();
        out.push_back({x, y, d});
    }
    return out;
}

void write_field_csv(std::ostream& out, const SolutionField& field) {
    const auto& mesh = field.disc->mesh;
    out << "i,j,x_c,y_c,phi\n";
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto g = mesh.geometry(c);
        out << fmt::format("{},{},{:.17g},{:.17g},{:.17g}\n", mesh.cell_i(c), mesh.cell_j(c), g.x_center(),
                           g.y_center(), scalar_flux(field, c));
    }
}

void write_psi_csv(std::ostream& out, const SolutionField& field) {
    const auto& mesh = field.disc->mesh;
    out << "i,j,m,psi_m\n";
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto psi = eval_center(field, c);
        for (Eigen::Index m = 0; m < psi.size(); ++m) {
            out << fmt::format("{},{},{},{:.17g}\n", mesh.cell_i(c), mesh.cell_j(c), m + 1, psi(m));
        }
    }
}

}  // namespace arte
