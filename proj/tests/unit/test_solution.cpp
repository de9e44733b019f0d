#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "arte/errors.hpp"
#include "arte/problems.hpp"
#include "arte/solver.hpp"

using namespace arte;

TEST_CASE("zero coefficients give the special solution") {
    const auto disc = discretize(constant_problem(2, 4, {3, 1, 0, 1}, 0.0));
    const auto cols = ColumnMap::full(disc.cell_count(), 24);
    const auto field = make_field(disc, cols, Eigen::VectorXd::Zero(cols.size));
    for (int c = 0; c < 4; ++c) {
        CHECK((eval_center(field, c).array() == 0.5).all());
        CHECK(scalar_flux(field, c) == doctest::Approx(12 * 0.5));
        CHECK(weighted_scalar_flux(field, c) == doctest::Approx(0.5));
    }
    CHECK(error_metric(field, field) == 0.0);
    CHECK_THROWS_AS(eval_field(field, 0, 0.9, 0.9), ConfigError);
}

TEST_CASE("single coefficient at its anchor") {
    const auto disc = discretize(constant_problem(1, 4, {3, 1, 0, 0}, 0.0));
    const auto cols = ColumnMap::full(1, 24);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(24);
    x(7) = 2.5;  // anchored on the right edge
    const auto field = make_field(disc, cols, x);
    CHECK((eval_field(field, 0, 1.0, 0.5) - 2.5 * disc.bases[0].xi(7)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("full solution is continuous and meets inflow data") {
    const auto disc = discretize(lattice_problem(8, 4));
    const auto full = solve_full(disc);
    const double norm = full.field.coeff_norm();
    for (const auto& f : disc.mesh.interfaces) {
        const Eigen::VectorXd a = eval_field(full.field, f.minus, f.x_mid, f.y_mid);
        if (f.interior()) {
            const Eigen::VectorXd b = eval_field(full.field, f.plus, f.x_mid, f.y_mid);
            CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8 * (1 + norm));
        } else {
            for (int m : inflow_ordinates(disc.quad, f.nx, f.ny)) CHECK(std::abs(a(m) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("metrics") {
    const auto disc = discretize(lattice_problem(32, 4));
    const auto sel = select_all(disc, 1e-1);
    CHECK(ratio_metric(sel) == doctest::Approx(0.58333333333333));
    CHECK(ratio_metric(select_all(disc, 0.0)) == 1.0);
}

TEST_CASE("buffer zone error decreases with delta") {
    const auto disc = discretize(buffer_zone_problem(16, 4));
    const auto full = solve_full(disc);
    const double e1 = error_metric(full.field, solve_adaptive(disc, 1e-1).field);
    const double e2 = error_metric(full.field, solve_adaptive(disc, 1e-2).field);
    CHECK(e2 < e1);
    const double e0 = error_metric(full.field, solve_adaptive(disc, 0.0).field);
    CHECK(e0 <= 1e-8 * (1 + field_norm(full.field)));
}

TEST_CASE("line probe") {
    const auto disc = discretize(lattice_problem(8, 4));
    const auto full = solve_full(disc);
    const auto same = line_probe(full.field, full.field, 1.0 / 32, 0.25 - 1.0 / 1280, 7.0 / 32, 0.25 - 1.0 / 1280, 50);
    CHECK(same.size() == 50u);
    for (const auto& s : same) CHECK(s.difference == 0.0);
    CHECK_THROWS_AS(line_probe(full.field, full.field, -0.1, 0, 0.5, 0.5, 3), ConfigError);
    const auto center = line_probe(full.field, full.field, 1.0 / 16, 1.0 / 16, 1.0 / 16, 1.0 / 16, 1);
    CHECK(center[0].x == 1.0 / 16);
}

TEST_CASE("field csv") {
    const auto disc = discretize(lattice_problem(4, 2));
    const auto full = solve_full(disc);
    std::ostringstream phi, psi;
    write_field_csv(phi, full.field);
    write_psi_csv(psi, full.field);
    CHECK(phi.str().rfind("i,j,x_c,y_c,phi\n1,1,0.125,0.125,", 0) == 0);
    const auto text = psi.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 16 * 4);
}
