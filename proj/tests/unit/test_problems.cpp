#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <unistd.h>

#include "arte/errors.hpp"
#include "arte/problems.hpp"

using namespace arte;
namespace fs = std::filesystem;

namespace {
fs::path scratch_dir(const char* name) {
    auto p = fs::temp_directory_path() / fmt::format("arte_test_{}_{}", name, ::getpid());
    fs::create_directories(p);
    return p;
}
}  // namespace

TEST_CASE("lattice") {
    const auto spec = lattice_problem(32, 12);
    CHECK(spec.media.size() == 1024u);
    int diffusive = 0;
    for (const auto& m : spec.media) {
        if (m.sigma_t == 1000.0) {
            ++diffusive;
            CHECK(m.gamma() == doctest::Approx(0.9999995));
            CHECK(m.sigma_a() == doctest::Approx(5e-4));
        } else {
            CHECK(m.gamma() == 0.5);
        }
    }
    CHECK(diffusive == 512);
    // blocks are 8x8 cells
    CHECK(lattice_diffusive(1, 1, 32) == lattice_diffusive(8, 8, 32));
    CHECK(lattice_diffusive(1, 1, 32) != lattice_diffusive(9, 1, 32));
    CHECK(spec.inflow == 1.0);
    CHECK_THROWS_AS(lattice_problem(6, 4), ConfigError);
}

TEST_CASE("buffer zone") {
    CHECK(buffer_zone_at(0, 0).sigma_t == doctest::Approx(1000.0));
    CHECK(buffer_zone_at(1, 1).sigma_t == doctest::Approx(142.857142857));
    const auto spec = buffer_zone_problem(8, 4);
    CHECK(spec.inflow == 0.0);
    for (const auto& m : spec.media) {
        CHECK(m.sigma_a() > 0);
        CHECK(m.g == 0.2);
    }
    // cell averages are close to the center values
    const auto c = buffer_zone_at(0.5 / 8 + 3.0 / 8, 0.5 / 8 + 5.0 / 8);
    const auto& m = spec.media[5 * 8 + 3];
    CHECK(m.sigma_t == doctest::Approx(c.sigma_t).epsilon(0.01));
    CHECK(m.q / m.sigma_a() == doctest::Approx(c.q / c.sigma_a).epsilon(0.02));
}

TEST_CASE("config dispatch and validation") {
    nlohmann::json cfg{{"problem", "lattice"}, {"I", 32}, {"N", 12}, {"deltas", {1e-1}}};
    const auto spec = problem_from_json(cfg);
    const auto direct = lattice_problem(32, 12);
    CHECK(spec.media == direct.media);
    CHECK(spec.deltas == std::vector<double>{1e-1});
    CHECK_THROWS_AS(problem_from_json({{"problem", "lattice"}, {"I", 8}}), ConfigError);
    CHECK_THROWS_AS(problem_from_json({{"problem", "nope"}, {"I", 8}, {"N", 4}}), ConfigError);
    CHECK_THROWS_AS(problem_from_json({{"problem", "lattice"}, {"I", 8}, {"N", 4}, {"extra", 1}}), ConfigError);
    CHECK_THROWS_AS(problem_from_json({{"problem", "lattice"}, {"I", 8}, {"N", 4}, {"deltas", {1.0}}}), ConfigError);
}

TEST_CASE("coefficient tables") {
    std::istringstream bad("i,j,sigma_t,sigma_s,g,q\n1,1,1,0.5,0,0\n2,1,1,1.5,0,0\n1,2,1,0.5,0,0\n2,2,1,0.5,0,0\n");
    try {
        read_coefficients_csv(bad, 2);
        FAIL("expected rejection");
    } catch (const DegenerateMedium& e) {
        CHECK(std::string(e.what()).find("cell (2, 1)") != std::string::npos);
    }
    std::istringstream missing("i,j,sigma_t,sigma_s,g,q\n1,1,1,0.5,0,0\n");
    CHECK_THROWS_AS(read_coefficients_csv(missing, 2), ConfigError);
}

TEST_CASE("round trip") {
    const auto dir = scratch_dir("roundtrip");
    for (auto spec : {buffer_zone_problem(4, 4), lattice_problem(4, 2), constant_problem(3, 2, {2, 1, 0.1, 0.4}, 0.4)}) {
        spec.deltas = {1e-2, 1e-3};
        // tabulate the coefficients so the reload goes through the CSV reader
        for (bool table : {false, true}) {
            auto out = spec;
            if (table) {
                out.name = "table";
                out.coefficients_csv.clear();
            }
            const auto path = dir / fmt::format("{}_{}.json", spec.name, table);
            save_problem(path, out);
            const auto back = load_problem(path);
            CHECK(back.media == spec.media);
            CHECK(back.inflow == spec.inflow);
            CHECK(back.deltas == spec.deltas);
            CHECK(back.I == spec.I);
            CHECK(back.N == spec.N);
        }
    }
    CHECK_THROWS_AS(load_problem(dir / "absent.json"), IoError);
    std::ofstream(dir / "broken.json") << "{ \"problem\": ";
    CHECK_THROWS_AS(load_problem(dir / "broken.json"), ConfigError);
    fs::remove_all(dir);
}
