#include "arte/solver.hpp"

#include <chrono>

#include "arte/log.hpp"

namespace arte {

namespace {
class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};
}  // namespace

FullSolve solve_full(const Discretization& disc) {
    FullSolve out;
    Stopwatch clock;
    out.system = assemble_full(disc);
    out.timings.assembly = clock.lap();
    out.factors = std::make_unique<Factorization>(out.system.matrix());
    out.x = out.factors->solve(out.system.rhs);
    out.residual = out.factors->residual(out.x, out.system.rhs);
    out.timings.solve = clock.lap();
    out.field = make_field(disc, out.system.columns, out.x);
    log().info("full solve: n={} nnz={} fill={} residual={:.2e}", out.system.n, out.system.triplets.size(),
               out.factors->fill(), out.residual);
    return out;
}

AdaptiveSolve solve_adaptive(const Discretization& disc, double delta) {
    AdaptiveSolve out;
    Stopwatch clock;
    out.selection = select_all(disc, delta);
    out.spaces = build_interface_spaces(disc, out.selection);
    out.timings.selection = clock.lap();
    out.system = assemble_adaptive(disc, out.selection, out.spaces);
    out.timings.assembly = clock.lap();
    out.factors = std::make_unique<Factorization>(out.system.matrix());
    out.x = out.factors->solve(out.system.rhs);
    out.residual = out.factors->residual(out.x, out.system.rhs);
    out.timings.solve = clock.lap();
    out.field = make_field(disc, out.system.columns, out.x, true, delta);
    log().info("adaptive solve: delta={} n={} ratio={:.4f} residual={:.2e}", delta, out.system.n,
               out.selection.ratio(), out.residual);
    return out;
}

}  // namespace arte
