#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <fmt/format.h>
#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string err;
};

fs::path root() {
    static const fs::path dir = [] {
        auto p = fs::temp_directory_path() / fmt::format("arte_cli_{}", ::getpid());
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

Run arte(const std::string& args) {
    const auto err = root() / "stderr.txt";
    const int status = std::system(fmt::format("{} {} 2> {}", ARTE_CLI, args, err.string()).c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> csv(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("solve writes the documented outputs") {
    const auto out = root() / "solve";
    REQUIRE(arte(fmt::format("solve --problem lattice --I 8 --N 4 --delta 1e-3 --out {}", out.string())).code == 0);
    for (const char* f : {"phi.csv", "psi.csv", "selection.csv", "manifest.json"}) CHECK(fs::exists(out / f));
    const json m = json::parse(slurp(out / "manifest.json"));
    for (const auto& f : m.at("outputs")) CHECK(fs::exists(out / f.get<std::string>()));
    CHECK(m.at("config").at("I") == 8);
    CHECK(m.at("posterior").at("bound").get<double>() >= 0.0);
    double phases = 0;
    for (const auto& [k, v] : m.at("timings").items()) {
        if (k == "wall") continue;
        CHECK(v.get<double>() >= 0.0);
        phases += v.get<double>();
    }
    const double wall = m.at("timings").at("wall");
    CHECK(phases <= wall);
    CHECK(csv(out / "phi.csv").size() == 64u);
    CHECK(csv(out / "selection.csv").size() == 64u);
}

TEST_CASE("delta zero adaptive output equals full output") {
    const auto a = root() / "adaptive0";
    const auto f = root() / "full0";
    REQUIRE(arte(fmt::format("solve --problem buffer_zone --I 4 --N 4 --delta 0 --out {}", a.string())).code == 0);
    REQUIRE(arte(fmt::format("solve --problem buffer_zone --I 4 --N 4 --full --out {}", f.string())).code == 0);
    const auto pa = csv(a / "psi.csv");
    const auto pf = csv(f / "psi.csv");
    REQUIRE(pa.size() == pf.size());
    double scale = 0, gap = 0;
    for (std::size_t r = 0; r < pa.size(); ++r) {
        scale = std::max(scale, std::abs(pf[r][3]));
        gap = std::max(gap, std::abs(pa[r][3] - pf[r][3]));
    }
    CHECK(gap <= 1e-8 * (1 + scale));
}

TEST_CASE("outputs are deterministic") {
    const auto a = root() / "det_a";
    const auto b = root() / "det_b";
    REQUIRE(arte(fmt::format("solve --problem lattice --I 8 --N 4 --delta 1e-2 --out {}", a.string())).code == 0);
    REQUIRE(arte(fmt::format("--threads 1 solve --problem lattice --I 8 --N 4 --delta 1e-2 --out {}", b.string())).code == 0);
    for (const char* f : {"phi.csv", "psi.csv", "selection.csv"}) CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("probe line") {
    const auto out = root() / "probe";
    REQUIRE(arte(fmt::format("solve --problem lattice --I 8 --N 4 --delta 1e-1 --probe-line 0.05,0.2,0.95,0.2,11 --out {}",
                             out.string()))
                .code == 0);
    CHECK(csv(out / "probe.csv").size() == 11u);
    CHECK(fs::exists(out / "phi_full.csv"));
}

TEST_CASE("compare") {
    const auto out = root() / "compare";
    REQUIRE(arte(fmt::format("compare --problem buffer_zone --I 8 --N 4 --deltas 1e-1,1e-2,0 --out {}", out.string())).code == 0);
    const auto rows = csv(out / "compare.csv");
    REQUIRE(rows.size() == 3u);
    for (const auto& r : rows) CHECK(r[3] + 1e-12 >= r[1]);  // the delta = 0 bound is exactly 0
    CHECK(rows[2][1] <= 1e-8);
    CHECK(rows[2][2] == 1.0);
    CHECK(slurp(out / "compare.csv").rfind("delta,error,ratio,bound\n", 0) == 0);
}

TEST_CASE("verify-assumptions grid size") {
    const auto out = root() / "verify";
    REQUIRE(arte(fmt::format("verify-assumptions --M 3 --gammas 0.1,0.5,0.9 --out {}", out.string())).code == 0);
    CHECK(csv(out / "rank_ratio.csv").size() == 9u);
    CHECK(csv(out / "c2.csv").size() == 9u);
    CHECK(csv(out / "boundary_rank.csv").size() == 3u);
    for (const auto& r : csv(out / "rank_ratio.csv")) CHECK(r.back() == 1.0);
}

TEST_CASE("slab and quadrature") {
    const auto out = root() / "slab";
    REQUIRE(arte(fmt::format("slab --out {}", out.string())).code == 0);
    CHECK(csv(out / "slab.csv").size() == 1001u);
    CHECK(slurp(out / "slab.csv").rfind("z,phi,phi_delta_0.01,phi_delta_0.001,phi_delta_0.0001,phi_delta_1e-05\n", 0) == 0);
    REQUIRE(arte(fmt::format("quadrature --N 4 --out {}", out.string())).code == 0);
    CHECK(csv(out / "quadrature.csv").size() == 12u);
}

TEST_CASE("config files") {
    const auto dir = root() / "cfg";
    fs::create_directories(dir);
    std::ofstream(dir / "p.json") << R"({"problem": "lattice", "I": 4, "N": 2, "deltas": [0.01]})";
    REQUIRE(arte(fmt::format("solve --config {} --out {}", (dir / "p.json").string(), (dir / "o").string())).code == 0);
    const json m = json::parse(slurp(dir / "o" / "manifest.json"));
    CHECK(m.at("config").at("delta") == 0.01);
    std::ofstream(dir / "bad.json") << R"({"problem": "lattice", "I": 4, "N": 2, "colour": 1})";
    const auto r = arte(fmt::format("solve --config {} --out {}", (dir / "bad.json").string(), (dir / "o").string()));
    CHECK(r.code == 2);
    CHECK(json::parse(r.err).at("error") == "SchemaError");
}

TEST_CASE("exit codes") {
    const auto out = (root() / "err").string();
    auto r = arte(fmt::format("solve --problem lattice --I 8 --N 4 --delta 1.0 --out {}", out));
    CHECK(r.code == 2);
    CHECK(json::parse(r.err).at("error") == "SchemaError");
    CHECK(arte(fmt::format("solve --problem lattice --I 8 --N 5 --out {}", out)).code == 2);
    CHECK(arte("solve --config /nonexistent/p.json").code == 4);
    CHECK(arte("solve --problem lattice --I 4 --N 2 --out /proc/arte_cannot_write").code == 4);
    CHECK(arte("bogus").code == 2);
    r = arte(fmt::format("eigen --N 2 --sigma-t 1 --sigma-s 1 --out {}", out));
    CHECK(r.code == 2);
    CHECK(json::parse(r.err).at("error") == "DegenerateMedium");
}

TEST_CASE("cleanup") { fs::remove_all(root()); }
