#pragma once

#include <memory>

#include "arte/assembly.hpp"
#include "arte/discretization.hpp"
#include "arte/linsolve.hpp"
#include "arte/reduction.hpp"
#include "arte/solution.hpp"

namespace arte {

/// Wall-clock seconds per phase.
struct Timings {
    double selection = 0.0;
    double assembly = 0.0;
    double solve = 0.0;
};

struct FullSolve {
    SparseSystem system;
    std::unique_ptr<Factorization> factors;
    Eigen::VectorXd x;
    SolutionField field;
    double residual = 0.0;
    Timings timings;
};

struct AdaptiveSolve {
    SelectionResult selection;
    InterfaceSpaces spaces;
    SparseSystem system;
    std::unique_ptr<Factorization> factors;
    Eigen::VectorXd x;
    SolutionField field;
    double residual = 0.0;
    Timings timings;
};

/// Complete TFPS: assemble and solve on all 8M basis functions per cell.
FullSolve solve_full(const Discretization& disc);

/// Adaptive TFPS at threshold delta.
AdaptiveSolve solve_adaptive(const Discretization& disc, double delta);

}  // namespace arte
