#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>
#include <sstream>

#include "arte/assembly.hpp"
#include "arte/linsolve.hpp"
#include "arte/problems.hpp"
#include "arte/solution.hpp"

using namespace arte;

TEST_CASE("full system dimensions") {
    const auto one = discretize(constant_problem(1, 2, {1, 0.5, 0, 1}, 2.0));
    const auto s1 = assemble_full(one);
    CHECK(s1.n == 8);
    CHECK(s1.rhs.size() == 8);
    const auto disc = discretize(lattice_problem(4, 4));
    const auto s = assemble_full(disc);
    CHECK(s.n == 384);
    CHECK(s.rows.size() == 384u);
    CHECK(s.matrix().nonZeros() > 0);
    // each interior row touches the two adjacent cells only
    const auto crs = s.crs();
    for (int r = 0; r < crs.rows(); ++r) {
        std::set<int> cells;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(crs, r); it; ++it) cells.insert(static_cast<int>(it.col() / 24));
        CHECK(cells.size() <= 2u);
    }
}

TEST_CASE("two-cell continuity rows vanish on a matching field") {
    // identical media and coefficients chosen so the field is globally smooth:
    // one basis function of the left cell continued into the right cell
    const CellMedium med{3, 1, 0.2, 0};
    auto spec = constant_problem(2, 4, med, 0.0);
    const auto disc = discretize(spec);
    const auto sys = assemble_full(disc);
    const int M = disc.M();
    const int left = disc.mesh.cell_id(1, 1), right = disc.mesh.cell_id(2, 1);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.n);
    const int k = 3 * M;  // x-family, anchored on the right edge
    const double h = disc.mesh.h;
    const double scale = std::exp(disc.bases[left].lambda(k) * med.sigma_t * h);
    x(sys.columns.at(left, k)) = 1.0;
    x(sys.columns.at(right, k)) = scale;
    const Eigen::VectorXd r = sys.matrix() * x;
    for (int row = 0; row < sys.n; ++row) {
        const auto& f = disc.mesh.interfaces[sys.rows[row].interface];
        if (f.interior() && f.orientation == Orientation::Vertical && f.minus == left) CHECK(std::abs(r(row)) < 1e-14);
    }
}

TEST_CASE("adaptive system bookkeeping") {
    const auto disc = discretize(lattice_problem(32, 4));
    const auto sel = select_all(disc, 1e-1);
    const auto spaces = build_interface_spaces(disc, sel);
    const auto sys = assemble_adaptive(disc, sel, spaces);
    CHECK(sys.n == 512 * 4 + 512 * 24);
    CHECK(sel.ratio() == doctest::Approx(7.0 / 12.0));
}

TEST_CASE("adaptive at delta zero equals full") {
    const auto disc = discretize(buffer_zone_problem(4, 4));
    const auto full = assemble_full(disc);
    const auto sel = select_all(disc, 0.0);
    const auto spaces = build_interface_spaces(disc, sel);
    const auto ad = assemble_adaptive(disc, sel, spaces);
    CHECK(ad.n == full.n);
    const Eigen::VectorXd xf = Factorization(full.matrix()).solve(full.rhs);
    const Eigen::VectorXd xa = Factorization(ad.matrix()).solve(ad.rhs);
    CHECK((xf - xa).cwiseAbs().maxCoeff() < 1e-10 * (1 + xf.cwiseAbs().maxCoeff()));
}

TEST_CASE("adaptive solution satisfies the projected conditions") {
    const auto disc = discretize(buffer_zone_problem(4, 4));
    const auto sel = select_all(disc, 1e-1);
    const auto spaces = build_interface_spaces(disc, sel);
    const auto sys = assemble_adaptive(disc, sel, spaces);
    const Eigen::VectorXd x = Factorization(sys.matrix()).solve(sys.rhs);
    const auto field = make_field(disc, sys.columns, x, true, 1e-1);
    for (std::size_t f = 0; f < spaces.size(); ++f) {
        const auto& face = disc.mesh.interfaces[f];
        const auto& rows = disc.rows(static_cast<int>(f));
        const Eigen::VectorXd a = eval_field(field, face.minus, face.x_mid, face.y_mid);
        Eigen::VectorXd jump(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const int m = rows[r];
            jump(r) = face.interior() ? a(m) - eval_field(field, face.plus, face.x_mid, face.y_mid)(m)
                                      : a(m) - disc.inflow(face.x_mid, face.y_mid, disc.quad.directions[m], m);
        }
        const Eigen::VectorXd y = spaces[f].coords(jump);
        const int ns = spaces[f].n_selected();
        if (ns > 0) CHECK(y.head(ns).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("projected full system") {
    const auto disc = discretize(lattice_problem(4, 4));
    const auto sel = select_all(disc, 1e-2);
    const auto spaces = build_interface_spaces(disc, sel);
    const auto blocks = assemble_projected_full(disc, sel, spaces);
    const auto ad = assemble_adaptive(disc, sel, spaces);
    // selected block is the adaptive matrix
    const Eigen::SparseMatrix<double> diff = blocks.A - ad.matrix();
    CHECK((diff.nonZeros() == 0 || Eigen::MatrixXd(diff).cwiseAbs().maxCoeff() == 0.0));
    CHECK((blocks.b - ad.rhs).cwiseAbs().maxCoeff() == 0.0);
    // same unknowns as the full system
    const auto full = assemble_full(disc);
    const Eigen::VectorXd xf = Factorization(full.matrix()).solve(full.rhs);
    const Eigen::VectorXd z = Factorization(blocks.assembled()).solve(blocks.assembled_rhs());
    const int ns = blocks.selected_columns.size;
    double gap = 0;
    for (int c = 0; c < disc.cell_count(); ++c) {
        for (int k = 0; k < 24; ++k) {
            const int s = blocks.selected_columns.at(c, k);
            const double v = s >= 0 ? z(s) : z(ns + blocks.unselected_columns.at(c, k));
            gap = std::max(gap, std::abs(v - xf(full.columns.at(c, k))));
        }
    }
    CHECK(gap < 1e-8 * (1 + xf.cwiseAbs().maxCoeff()));
}

TEST_CASE("exports and determinism") {
    const auto disc = discretize(lattice_problem(4, 2));
    const auto a = assemble_full(disc);
    const auto b = assemble_full(disc);
    REQUIRE(a.triplets.size() == b.triplets.size());
    bool same = true;
    for (std::size_t n = 0; n < a.triplets.size(); ++n) {
        same = same && a.triplets[n].row() == b.triplets[n].row() && a.triplets[n].col() == b.triplets[n].col() &&
               a.triplets[n].value() == b.triplets[n].value();
    }
    CHECK(same);
    std::ostringstream mm, rhs;
    write_matrix_market(mm, a);
    write_rhs(rhs, a);
    CHECK(mm.str().rfind("%%MatrixMarket matrix coordinate real general\n128 128 ", 0) == 0);
    const auto text = rhs.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 128);
}
