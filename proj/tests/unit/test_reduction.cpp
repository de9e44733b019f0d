#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "arte/errors.hpp"
#include "arte/problems.hpp"
#include "arte/reduction.hpp"

using namespace arte;

namespace {
CellBasis lone_cell(int N, const CellMedium& med, double h) {
    const auto q = build_quadrature(N);
    return cell_eigenbasis(q, build_kernel(q, med.g), med, {0.0, h, 0.0, h});
}

bool orthonormal(const Eigen::MatrixXd& q) {
    if (q.cols() == 0) return true;
    return (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff() < 1e-12;
}
}  // namespace

TEST_CASE("delta zero keeps everything") {
    const auto b = lone_cell(4, {1000, 999.9995, 0, 0}, 1.0 / 32);
    const auto s = select_basis(b, 1.0 / 32, 0.0);
    CHECK(s.selected.size() == 24u);
    CHECK(s.unselected.empty());
    CHECK_THROWS_AS(select_basis(b, 1.0 / 32, 1.0), ConfigError);
}

TEST_CASE("diffusive cell keeps four basis functions") {
    for (int N : {2, 4, 6, 8, 10, 12}) {
        const auto b = lone_cell(N, {1000, 999.9995, 0, 0}, 1.0 / 32);
        for (double d : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}) CHECK(select_basis(b, 1.0 / 32, d).selected.size() == 4u);
    }
}

TEST_CASE("transport cell keeps the full basis") {
    const auto b = lone_cell(4, {1, 0.5, 0, 0}, 1.0 / 32);
    for (double d : {1e-1, 1e-3, 1e-5}) CHECK(select_basis(b, 1.0 / 32, d).selected.size() == 24u);
}

TEST_CASE("selection is monotone in delta") {
    const auto b = lone_cell(6, {50, 49, 0.2, 0}, 1.0 / 16);
    const double ds[] = {0.0, 1e-8, 1e-4, 1e-2, 0.3, 0.9};
    for (int n = 1; n < 6; ++n) {
        const auto lo = select_basis(b, 1.0 / 16, ds[n - 1]);
        const auto hi = select_basis(b, 1.0 / 16, ds[n]);
        for (int k : hi.selected) CHECK(lo.contains(k));
    }
}

TEST_CASE("interface spaces") {
    const auto spec = buffer_zone_problem(4, 4);
    const auto disc = discretize(spec);
    const int M = disc.M();
    for (double delta : {0.0, 1e-2, 1e-1}) {
        const auto sel = select_all(disc, delta);
        const auto spaces = build_interface_spaces(disc, sel);
        for (std::size_t f = 0; f < spaces.size(); ++f) {
            const auto& s = spaces[f];
            const auto& face = disc.mesh.interfaces[f];
            CHECK(s.dim() == (face.interior() ? 4 * M : 2 * M));
            CHECK(s.selected.size() + s.unselected.size() == static_cast<std::size_t>(s.dim()));
            const int ns = s.n_selected();
            const auto& E = s.frame->E;
            CHECK(orthonormal(E.leftCols(ns)));
            CHECK(orthonormal(E.rightCols(s.dim() - ns)));
            CHECK(s.frame->inv_norm_inf >= 1.0 - 1e-12);
            CHECK(s.frame->inv_norm_inf <= std::sqrt(4.0 * M) * s.frame->inv_norm_2 + 1e-12);
            if (delta == 0.0) CHECK(s.frame->inv_norm_2 == doctest::Approx(1.0).epsilon(1e-12));
            // refs match the frame built directly for this interface
            const auto direct = build_interface_space(disc, sel, static_cast<int>(f));
            CHECK((direct.frame->E - E).cwiseAbs().maxCoeff() == 0.0);
            REQUIRE(direct.selected.size() == s.selected.size());
            for (std::size_t n = 0; n < s.selected.size(); ++n) {
                CHECK(direct.selected[n].cell == s.selected[n].cell);
                CHECK(direct.selected[n].k == s.selected[n].k);
            }
        }
        long rows = 0;
        for (const auto& s : spaces) rows += s.n_selected();
        CHECK(rows == sel.selected_count());
    }
}

TEST_CASE("boundary generators are inflow rows") {
    const auto disc = discretize(lattice_problem(4, 4));
    const auto& left = disc.mesh.interfaces[disc.mesh.interior_count];
    REQUIRE(left.wall == Side::Left);
    for (int m : disc.rows(disc.mesh.interior_count)) CHECK(disc.quad.directions[m].c > 0);
}

TEST_CASE("oblique coordinates and projection") {
    const auto disc = discretize(buffer_zone_problem(4, 4));
    const auto sel = select_all(disc, 1e-1);
    const auto spaces = build_interface_spaces(disc, sel);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (const auto& s : spaces) {
        const int d = s.dim();
        const int ns = s.n_selected();
        for (int k = 0; k < d; ++k) {
            const Eigen::VectorXd y = s.coords(s.frame->E.col(k));
            CHECK((y - Eigen::VectorXd::Unit(d, k)).cwiseAbs().maxCoeff() < 1e-12);
        }
        for (int k = ns; k < d; ++k) CHECK(s.project(s.frame->E.col(k)).cwiseAbs().maxCoeff() < 1e-12);
        for (int t = 0; t < 100; ++t) {
            const Eigen::VectorXd l = Eigen::VectorXd::NullaryExpr(d, [&] { return u(rng); });
            const Eigen::VectorXd p = s.project(l);
            CHECK((s.project(p) - p).cwiseAbs().maxCoeff() < 1e-10);
            const Eigen::VectorXd y = s.coords(l);
            CHECK((s.frame->E * y - l).cwiseAbs().maxCoeff() <= 1e-10 * l.cwiseAbs().maxCoeff());
            CHECK(y.cwiseAbs().maxCoeff() <= s.frame->inv_norm_inf * l.cwiseAbs().maxCoeff() + 1e-12);
        }
    }
}

TEST_CASE("rank and singularity errors") {
    Eigen::MatrixXd g(4, 2);
    g << 1, 1, 0, 0, 0, 0, 0, 0;
    Eigen::MatrixXd u(4, 2);
    u << 0, 0, 0, 0, 1, 0, 0, 1;
    CHECK_THROWS_AS(build_frame(g, u), RankDeficient);
    Eigen::MatrixXd g2(4, 2);
    g2 << 1, 0, 0, 1, 0, 0, 0, 0;
    Eigen::MatrixXd u2(4, 2);
    u2 << 1, 0, 0, 1, 0, 0, 0, 0;
    CHECK_THROWS_AS(build_frame(g2, u2), SingularE);
    CHECK_THROWS_AS(build_frame(g2, Eigen::MatrixXd(4, 1)), CountMismatch);
}

TEST_CASE("selection csv") {
    const auto disc = discretize(lattice_problem(4, 2));
    const auto sel = select_all(disc, 1e-1);
    std::ostringstream os;
    write_selection_csv(os, disc, sel);
    const auto text = os.str();
    CHECK(text.rfind("i,j,n_selected\n1,1,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);
}
