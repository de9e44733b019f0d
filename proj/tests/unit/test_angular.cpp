#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "arte/angular.hpp"
#include "arte/errors.hpp"

using namespace arte;

TEST_CASE("direction counts follow N(N+2)/2") {
    CHECK(build_quadrature(2).size() == 4);
    CHECK(build_quadrature(4).size() == 12);
    CHECK(build_quadrature(12).size() == 84);
    for (int n : {2, 4, 6, 8, 10, 12}) {
        const auto q = build_quadrature(n);
        CHECK(q.size() == n * (n + 2) / 2);
        CHECK(q.per_quadrant * 4 == q.size());
    }
}

TEST_CASE("invalid orders are rejected") {
    CHECK_THROWS_AS(build_quadrature(3), ConfigError);
    CHECK_THROWS_AS(build_quadrature(0), ConfigError);
    CHECK_THROWS_AS(build_quadrature(26), ConfigError);
}

TEST_CASE("weights, reflections and moments") {
    for (int n : {2, 4, 8, 12}) {
        const auto q = build_quadrature(n);
        const double total = std::accumulate(q.weights.begin(), q.weights.end(), 0.0);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        double mc = 0, ms = 0, mcs = 0;
        for (int m = 0; m < q.size(); ++m) {
            const auto& d = q.directions[m];
            CHECK(q.weights[m] > 0.0);
            CHECK(d.c != 0.0);
            CHECK(d.s != 0.0);
            CHECK(d.c * d.c + d.s * d.s < 1.0);
            CHECK(d.c == doctest::Approx(std::sqrt(1 - d.zeta * d.zeta) * std::cos(d.theta)));
            mc += q.weights[m] * d.c;
            ms += q.weights[m] * d.s;
            mcs += q.weights[m] * d.c * d.s;
            // each reflection image is present with equal weight
            for (auto [sx, sy] : {std::pair{-1, 1}, {-1, -1}, {1, -1}}) {
                bool found = false;
                for (int p = 0; p < q.size(); ++p) {
                    const auto& e = q.directions[p];
                    if (std::abs(e.c - sx * d.c) < 1e-14 && std::abs(e.s - sy * d.s) < 1e-14 &&
                        std::abs(q.weights[p] - q.weights[m]) < 1e-15) {
                        found = true;
                    }
                }
                CHECK(found);
            }
        }
        CHECK(std::abs(mc) < 1e-15);
        CHECK(std::abs(ms) < 1e-15);
        CHECK(std::abs(mcs) < 1e-15);
    }
}

TEST_CASE("quadrant layout") {
    const auto q = build_quadrature(4);
    const int M = q.per_quadrant;
    for (int m = 0; m < M; ++m) {
        CHECK(q.directions[m].c > 0);
        CHECK(q.directions[m].s > 0);
        CHECK(q.directions[M + m].c < 0);
        CHECK(q.directions[M + m].s > 0);
        CHECK(q.directions[2 * M + m].c < 0);
        CHECK(q.directions[2 * M + m].s < 0);
        CHECK(q.directions[3 * M + m].c > 0);
        CHECK(q.directions[3 * M + m].s < 0);
    }
}

TEST_CASE("HG phase function") {
    CHECK(henyey_greenstein(0.5, 1.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(henyey_greenstein(0.0, 0.3) == 1.0);
    CHECK(henyey_greenstein(-0.5, -1.0) == doctest::Approx(6.0));
}

TEST_CASE("isotropic kernel is all ones") {
    const auto q = build_quadrature(6);
    const auto k = build_kernel(q, 0.0);
    CHECK((k.entries.array() == 1.0).all());
}

TEST_CASE("anisotropic kernel is symmetric, positive and normalized") {
    for (double g : {0.2, -0.3, 0.9}) {
        const auto q = build_quadrature(4);
        const auto k = build_kernel(q, g);
        CHECK((k.entries - k.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK((k.entries.array() > 0.0).all());
        for (int m = 0; m < q.size(); ++m) {
            double row = 0;
            for (int n = 0; n < q.size(); ++n) row += k.entries(m, n) * q.weights[n];
            CHECK(row == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
    CHECK_THROWS_AS(build_kernel(build_quadrature(2), 1.0), ConfigError);
}

TEST_CASE("raw kernel with -g equals kernel at reversed cosine") {
    const auto q = build_quadrature(4);
    const auto plus = raw_kernel(q, 0.4);
    const auto minus = raw_kernel(q, -0.4);
    for (int m = 0; m < q.size(); ++m) {
        for (int n = 0; n < q.size(); ++n) {
            const auto& a = q.directions[m];
            const auto& b = q.directions[n];
            const double mu = a.c * b.c + a.s * b.s;
            CHECK(minus(m, n) == doctest::Approx(henyey_greenstein(0.4, -mu)));
            CHECK(plus(m, n) == doctest::Approx(henyey_greenstein(0.4, mu)));
        }
    }
}

TEST_CASE("inflow ordinates and csv") {
    const auto q = build_quadrature(4);
    const auto left = inflow_ordinates(q, -1.0, 0.0);
    CHECK(left.size() == 6u);
    for (int m : left) CHECK(q.directions[m].c > 0);
    std::ostringstream os;
    write_quadrature_csv(os, q);
    const auto text = os.str();
    CHECK(text.rfind("m,c,s,zeta,theta,weight\n", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 13);
}
