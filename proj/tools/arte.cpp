// arte: command-line driver for the TFPS / adaptive TFPS solvers.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "arte/diagnostics.hpp"
#include "arte/errors.hpp"
#include "arte/log.hpp"
#include "arte/parallel.hpp"
#include "arte/problems.hpp"
#include "arte/slab1d.hpp"
#include "arte/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace arte;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); }
};

struct ProblemFlags {
    std::string problem;
    std::string config;
    std::optional<int> I;
    std::optional<int> N;
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& f) {
    cmd->add_option("--problem", f.problem, "built-in problem: lattice | buffer_zone");
    cmd->add_option("--config", f.config, "JSON problem config");
    cmd->add_option("--I", f.I, "cells per side");
    cmd->add_option("--N", f.N, "quadrature order");
}

void check_delta(double d) {
    if (!(d >= 0.0 && d < 1.0)) throw ConfigError(fmt::format("delta must lie in [0, 1), got {}", d), "SchemaError");
}

/// Config file and flags merged; flags win.
ProblemSpec resolve_problem(const ProblemFlags& f, json& resolved) {
    fs::path base;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw IoError(fmt::format("cannot open config {}", f.config));
        try {
            resolved = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError(fmt::format("{}: {}", f.config, e.what()), "SchemaError");
        }
        base = fs::path(f.config).parent_path();
    } else if (f.problem.empty()) {
        throw ConfigError("either --problem or --config is required", "SchemaError");
    } else {
        resolved = json::object();
    }
    if (!f.problem.empty()) resolved["problem"] = f.problem;
    if (f.I) resolved["I"] = *f.I;
    if (f.N) resolved["N"] = *f.N;
    return problem_from_json(resolved, base);
}

class Output {
public:
    explicit Output(fs::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError(fmt::format("cannot create output directory {}: {}", dir_.string(), ec.message()));
    }

    template <class Writer>
    void write(const std::string& name, Writer&& writer) {
        Stopwatch clock;
        const fs::path path = dir_ / name;
        std::ofstream out(path);
        if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
        writer(out);
        out.flush();
        if (!out) throw IoError(fmt::format("write to {} failed", path.string()));
        files_.push_back(name);
        seconds_ += clock.seconds();
    }

    double seconds() const { return seconds_; }

    void manifest(json m) {
        m["outputs"] = files_;
        m["outputs"].push_back("manifest.json");
        const fs::path path = dir_ / "manifest.json";
        std::ofstream out(path);
        if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
        out << m.dump(2) << '\n';
    }

private:
    fs::path dir_;
    std::vector<std::string> files_;
    double seconds_ = 0.0;
};

json base_manifest(const std::string& command, const json& config) {
    return {{"command", command},
            {"config", config},
            {"versions",
             {{"arte", kVersion},
              {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
              {"spdlog", fmt::format("{}.{}.{}", SPDLOG_VER_MAJOR, SPDLOG_VER_MINOR, SPDLOG_VER_PATCH)}}},
            {"threads", thread_count()}};
}

json to_json(const PosteriorReport& r) {
    return {{"delta", r.delta},
            {"M", r.M},
            {"C_inf", r.C_inf},
            {"C_2", r.C_2},
            {"C_generator", r.C_generator},
            {"C_bound", r.C_bound},
            {"inv_norm_estimate", r.inv_norm_estimate},
            {"estimator_probes", r.estimator_probes},
            {"coeff_norm", r.coeff_norm},
            {"inflow_norm", r.inflow_norm},
            {"source_norm", r.source_norm},
            {"delta0", r.delta0},
            {"above_delta0", r.above_delta0},
            {"bound", r.bound}};
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw ConfigError(fmt::format("`{}` is not a number", item), "SchemaError");
        }
    }
    return out;
}

// ---------------------------------------------------------------- solve

struct SolveFlags {
    ProblemFlags problem;
    std::optional<double> delta;
    bool full = false;
    bool adaptive = false;
    std::string probe_line;
    std::string out = ".";
};

int cmd_solve(const SolveFlags& f) {
    Stopwatch wall;
    json config;
    const ProblemSpec spec = resolve_problem(f.problem, config);
    double delta = f.delta.value_or(spec.deltas.empty() ? 1e-3 : spec.deltas.front());
    check_delta(delta);
    config["delta"] = delta;

    std::vector<double> probe;
    if (!f.probe_line.empty()) {
        probe = parse_list(f.probe_line);
        if (probe.size() != 5 || probe[4] < 1 || probe[4] != std::floor(probe[4])) {
            throw ConfigError("--probe-line expects x0,y0,x1,y1,n with integer n >= 1", "SchemaError");
        }
    }
    const bool run_adaptive = f.adaptive || !f.full;
    const bool run_full = f.full || !probe.empty();

    Output out(f.out);
    json timing;
    Stopwatch eig;
    const Discretization disc = discretize(spec);
    timing["eigen"] = eig.seconds();

    std::optional<FullSolve> full;
    std::optional<AdaptiveSolve> adaptive;
    json manifest = base_manifest("solve", config);
    double selection = 0, assembly = 0, solve = 0;
    if (run_full) {
        full = solve_full(disc);
        assembly += full->timings.assembly;
        solve += full->timings.solve;
        manifest["full"] = {{"unknowns", full->system.n}, {"residual", full->residual}};
    }
    if (run_adaptive) {
        adaptive = solve_adaptive(disc, delta);
        selection += adaptive->timings.selection;
        assembly += adaptive->timings.assembly;
        solve += adaptive->timings.solve;
        Stopwatch diag;
        const auto report = posterior_bound(disc, *adaptive);
        timing["diagnostics"] = diag.seconds();
        manifest["adaptive"] = {{"unknowns", adaptive->system.n},
                                {"residual", adaptive->residual},
                                {"ratio", ratio_metric(adaptive->selection)}};
        manifest["posterior"] = to_json(report);
    }
    if (run_adaptive) timing["selection"] = selection;
    timing["assembly"] = assembly;
    timing["solve"] = solve;
    if (full && adaptive) manifest["error"] = error_metric(full->field, adaptive->field);

    const SolutionField& primary = adaptive ? adaptive->field : full->field;
    out.write("phi.csv", [&](std::ostream& os) { write_field_csv(os, primary); });
    out.write("psi.csv", [&](std::ostream& os) { write_psi_csv(os, primary); });
    if (adaptive) {
        out.write("selection.csv", [&](std::ostream& os) { write_selection_csv(os, disc, adaptive->selection); });
        if (full) {
            out.write("phi_full.csv", [&](std::ostream& os) { write_field_csv(os, full->field); });
            out.write("psi_full.csv", [&](std::ostream& os) { write_psi_csv(os, full->field); });
        }
    }
    if (!probe.empty()) {
        const SolutionField& other = adaptive ? adaptive->field : full->field;
        const auto samples =
            line_probe(full->field, other, probe[0], probe[1], probe[2], probe[3], static_cast<int>(probe[4]));
        out.write("probe.csv", [&](std::ostream& os) {
            os << "x,y,difference\n";
            for (const auto& s : samples) os << fmt::format("{:.17g},{:.17g},{:.17g}\n", s.x, s.y, s.difference);
        });
    }
    timing["output"] = out.seconds();
    timing["wall"] = wall.seconds();
    manifest["timings"] = timing;
    out.manifest(std::move(manifest));
    return 0;
}

// ---------------------------------------------------------------- compare

struct CompareFlags {
    ProblemFlags problem;
    std::string deltas;
    std::string out = ".";
};

int cmd_compare(const CompareFlags& f) {
    Stopwatch wall;
    json config;
    const ProblemSpec spec = resolve_problem(f.problem, config);
    std::vector<double> deltas = f.deltas.empty() ? spec.deltas : parse_list(f.deltas);
    if (deltas.empty()) deltas = {1e-1, 1e-2, 1e-3, 1e-4};
    for (double d : deltas) check_delta(d);
    config["deltas"] = deltas;

    Output out(f.out);
    json timing;
    Stopwatch eig;
    const Discretization disc = discretize(spec);
    timing["eigen"] = eig.seconds();
    const FullSolve full = solve_full(disc);
    double selection = 0, assembly = full.timings.assembly, solve = full.timings.solve, diagnostics = 0;

    json rows = json::array();
    std::ostringstream csv;
    csv << "delta,error,ratio,bound\n";
    for (double d : deltas) {
        const AdaptiveSolve ad = solve_adaptive(disc, d);
        selection += ad.timings.selection;
        assembly += ad.timings.assembly;
        solve += ad.timings.solve;
        Stopwatch diag;
        const auto report = posterior_bound(disc, ad);
        diagnostics += diag.seconds();
        const double error = error_metric(full.field, ad.field);
        const double ratio = ratio_metric(ad.selection);
        csv << fmt::format("{:g},{:.17g},{:.17g},{:.17g}\n", d, error, ratio, report.bound);
        rows.push_back(to_json(report));
    }
    out.write("compare.csv", [&](std::ostream& os) { os << csv.str(); });
    json manifest = base_manifest("compare", config);
    manifest["posterior"] = rows;
    timing["selection"] = selection;
    timing["assembly"] = assembly;
    timing["solve"] = solve;
    timing["diagnostics"] = diagnostics;
    timing["output"] = out.seconds();
    timing["wall"] = wall.seconds();
    manifest["timings"] = timing;
    out.manifest(std::move(manifest));
    return 0;
}

// ---------------------------------------------------------------- verify-assumptions

struct VerifyFlags {
    std::string Ms;
    std::string gammas;
    std::string g_pairs;
    std::string out = ".";
};

int cmd_verify(const VerifyFlags& f) {
    Stopwatch wall;
    StudyGrid grid;
    if (!f.gammas.empty()) grid.gammas = parse_list(f.gammas);
    if (!f.Ms.empty()) {
        grid.Ms.clear();
        for (double m : parse_list(f.Ms)) {
            if (m != std::floor(m)) throw ConfigError(fmt::format("--M expects integers, got {}", m), "SchemaError");
            order_for_M(static_cast<int>(m));  // rejects counts that no order produces
            grid.Ms.push_back(static_cast<int>(m));
        }
    }
    if (!f.g_pairs.empty()) {
        // "gm:gp,gm:gp,..."
        grid.g_pairs.clear();
        std::stringstream ss(f.g_pairs);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw ConfigError(fmt::format("g pair `{}` must be gm:gp", item), "SchemaError");
            const auto a = parse_list(item.substr(0, colon));
            const auto b = parse_list(item.substr(colon + 1));
            if (a.size() != 1 || b.size() != 1) throw ConfigError(fmt::format("g pair `{}` must be gm:gp", item), "SchemaError");
            grid.g_pairs.emplace_back(a[0], b[0]);
        }
    }
    for (double g : grid.gammas) {
        if (!(g >= 0.0 && g < 1.0)) throw ConfigError(fmt::format("gamma must lie in [0, 1), got {}", g), "SchemaError");
    }
    for (auto [a, b] : grid.g_pairs) {
        if (!(std::abs(a) < 1.0 && std::abs(b) < 1.0)) throw ConfigError("g must lie in (-1, 1)", "SchemaError");
    }

    json config{{"gammas", grid.gammas}, {"Ms", grid.Ms}, {"sigma_ts", grid.sigma_ts}, {"deltas", grid.deltas},
                {"h", grid.h}};
    config["g_pairs"] = json::array();
    for (auto [a, b] : grid.g_pairs) config["g_pairs"].push_back({a, b});

    Output out(f.out);
    json timing;
    Stopwatch t1;
    const auto rank = rank_ratio_study(grid);
    const auto boundary = boundary_rank_study(grid);
    timing["rank"] = t1.seconds();
    Stopwatch t2;
    const auto c2 = c2_sweep(grid);
    timing["c2"] = t2.seconds();

    out.write("rank_ratio.csv", [&](std::ostream& os) { write_rank_ratio_csv(os, rank); });
    out.write("boundary_rank.csv", [&](std::ostream& os) { write_boundary_rank_csv(os, boundary); });
    out.write("c2.csv", [&](std::ostream& os) { write_c2_csv(os, c2); });

    double min_rank = 1.0, max_c2 = 0.0;
    for (const auto& r : rank) min_rank = std::min(min_rank, r.rank_ratio);
    for (const auto& r : boundary) min_rank = std::min(min_rank, r.rank_ratio);
    for (const auto& r : c2) max_c2 = std::max(max_c2, r.max_inv_norm2);
    json manifest = base_manifest("verify-assumptions", config);
    manifest["summary"] = {{"min_rank_ratio", min_rank}, {"max_c2", max_c2}};
    timing["output"] = out.seconds();
    timing["wall"] = wall.seconds();
    manifest["timings"] = timing;
    out.manifest(std::move(manifest));
    return 0;
}

// ---------------------------------------------------------------- slab

struct SlabFlags {
    int M = 10;
    double sigma_t = 10.0;
    double sigma_s = 5.0;
    double q = 0.0;
    double inflow_left = 1.0;
    double inflow_right = 0.0;
    std::string deltas = "1e-2,1e-3,1e-4,1e-5";
    int samples = 1001;
    std::string out = ".";
};

int cmd_slab(const SlabFlags& f) {
    Stopwatch wall;
    const auto deltas = parse_list(f.deltas);
    for (double d : deltas) check_delta(d);
    slab::SlabProblem p;
    p.sigma_t = f.sigma_t;
    p.sigma_s = f.sigma_s;
    p.q = f.q;
    p.M = f.M;
    p.inflow_left.assign(f.M, f.inflow_left);
    p.inflow_right.assign(f.M, f.inflow_right);
    const auto full = slab::solve_slab(p);

    Output out(f.out);
    out.write("slab.csv", [&](std::ostream& os) { slab::write_truncation_csv(os, full, deltas, f.samples); });
    out.write("slab_counts.csv", [&](std::ostream& os) {
        os << "delta,retained\n";
        for (double d : deltas) os << fmt::format("{:g},{}\n", d, slab::truncate_slab(full, d).retained());
    });
    json config{{"M", f.M},         {"sigma_t", f.sigma_t},         {"sigma_s", f.sigma_s},
                {"q", f.q},         {"inflow_left", f.inflow_left}, {"inflow_right", f.inflow_right},
                {"deltas", deltas}, {"samples", f.samples}};
    json manifest = base_manifest("slab", config);
    manifest["timings"] = {{"wall", wall.seconds()}};
    out.manifest(std::move(manifest));
    return 0;
}

// ---------------------------------------------------------------- quadrature / eigen

int cmd_quadrature(int N, const std::string& dir) {
    const auto quad = build_quadrature(N);
    Output out(dir);
    out.write("quadrature.csv", [&](std::ostream& os) { write_quadrature_csv(os, quad); });
    out.manifest(base_manifest("quadrature", {{"N", N}}));
    return 0;
}

struct EigenFlags {
    int N = 4;
    CellMedium medium{1000.0, 999.9995, 0.0, 0.0};
    std::string out = ".";
};

int cmd_eigen(const EigenFlags& f) {
    validate(f.medium);
    const auto quad = build_quadrature(f.N);
    const auto kernel = build_kernel(quad, f.medium.g);
    const auto spectrum = compute_spectrum(quad, kernel, f.medium);
    Output out(f.out);
    out.write("eigen.csv", [&](std::ostream& os) { write_eigen_csv(os, spectrum); });
    out.manifest(base_manifest("eigen", {{"N", f.N},
                                         {"sigma_t", f.medium.sigma_t},
                                         {"sigma_s", f.medium.sigma_s},
                                         {"g", f.medium.g}}));
    return 0;
}

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Config: return 2;
        case ErrorCategory::Numerical: return 3;
        case ErrorCategory::Io: return 4;
        case ErrorCategory::Internal: break;
    }
    return 1;
}

void report_error(const std::string& name, const std::string& category, const std::string& what) {
    std::cerr << json{{"error", name}, {"category", category}, {"message", what}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tailored finite point solvers for the discrete-ordinate radiative transfer equation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    SolveFlags solve;
    auto* s = app.add_subcommand("solve", "solve one problem with the full and/or adaptive scheme");
    add_problem_flags(s, solve.problem);
    s->add_option("--delta", solve.delta, "adaptive threshold in [0, 1)");
    s->add_flag("--full", solve.full, "run the full scheme");
    s->add_flag("--adaptive", solve.adaptive, "run the adaptive scheme (default)");
    s->add_option("--probe-line", solve.probe_line, "x0,y0,x1,y1,n: full minus adaptive scalar flux");
    s->add_option("--out", solve.out, "output directory");

    CompareFlags compare;
    auto* c = app.add_subcommand("compare", "error, ratio and bound against the full scheme over a delta list");
    add_problem_flags(c, compare.problem);
    c->add_option("--deltas", compare.deltas, "comma-separated thresholds");
    c->add_option("--out", compare.out, "output directory");

    VerifyFlags verify;
    auto* v = app.add_subcommand("verify-assumptions", "rank-ratio and interface-conditioning sweeps");
    v->add_option("--M", verify.Ms, "comma-separated directions per quadrant");
    v->add_option("--gammas", verify.gammas, "comma-separated scattering ratios");
    v->add_option("--g-pairs", verify.g_pairs, "comma-separated gm:gp anisotropy pairs");
    v->add_option("--out", verify.out, "output directory");

    SlabFlags slab;
    auto* sl = app.add_subcommand("slab", "1D slab truncation profiles");
    sl->add_option("--M", slab.M, "ordinates per half-range");
    sl->add_option("--sigma-t", slab.sigma_t);
    sl->add_option("--sigma-s", slab.sigma_s);
    sl->add_option("--q", slab.q);
    sl->add_option("--inflow-left", slab.inflow_left);
    sl->add_option("--inflow-right", slab.inflow_right);
    sl->add_option("--deltas", slab.deltas, "comma-separated thresholds");
    sl->add_option("--samples", slab.samples)->check(CLI::PositiveNumber);
    sl->add_option("--out", slab.out, "output directory");

    int quad_order = 4;
    std::string quad_out = ".";
    auto* q = app.add_subcommand("quadrature", "write the ordinate set");
    q->add_option("--N", quad_order, "quadrature order")->required();
    q->add_option("--out", quad_out, "output directory");

    EigenFlags eigen;
    auto* e = app.add_subcommand("eigen", "write the eigen-families of one homogeneous cell");
    e->add_option("--N", eigen.N, "quadrature order");
    e->add_option("--sigma-t", eigen.medium.sigma_t);
    e->add_option("--sigma-s", eigen.medium.sigma_s);
    e->add_option("--g", eigen.medium.g);
    e->add_option("--out", eigen.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) return app.exit(err);
        report_error("UsageError", "config", err.what());
        return 2;
    }

    try {
        log();  // applies ARTE_LOG
        if (threads > 0) set_thread_count(threads);
        if (*s) return cmd_solve(solve);
        if (*c) return cmd_compare(compare);
        if (*v) return cmd_verify(verify);
        if (*sl) return cmd_slab(slab);
        if (*q) return cmd_quadrature(quad_order, quad_out);
        if (*e) return cmd_eigen(eigen);
    } catch (const Error& err) {
        static const char* names[] = {"config", "numerical", "io", "internal"};
        report_error(err.name(), names[static_cast<int>(err.category())], err.what());
        return exit_code(err.category());
    } catch (const std::exception& err) {
        report_error("InternalError", "internal", err.what());
        return 1;
    }
    return 1;
}
