#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "arte/assembly.hpp"
#include "arte/discretization.hpp"
#include "arte/reduction.hpp"
#include "arte/solution.hpp"
#include "arte/solver.hpp"

namespace arte {

/// Ingredients and value of the a-posteriori bound on the cell-center
/// difference between the full and the adaptive solution.
struct PosteriorReport {
    int M = 0;
    double delta = 0.0;
    double C_inf = 0.0;        // max_i ||E_i^{-1}||_inf
    double C_2 = 0.0;          // max_i ||E_i^{-1}||_2
    double C_generator = 0.0;  // max_i of the unselected-generator coordinate map norm
    double C_bound = 0.0;      // constant used in the bound: max(C_inf, C_generator)
    double inv_norm_estimate = 0.0;  // estimate of ||A_delta^{-1}||_inf
    int estimator_probes = 0;
    double coeff_norm = 0.0;   // ||alpha_delta||_inf
    double inflow_norm = 0.0;  // max |Psi| over boundary conditions
    double source_norm = 0.0;  // max |q / sigma_a|
    double delta0 = 0.0;
    bool above_delta0 = false;
    double bound = 0.0;
};

PosteriorReport posterior_bound(const Discretization& disc, const AdaptiveSolve& adaptive);

/// max |Psi| over all boundary conditions and max |q/sigma_a| over cells.
double inflow_norm(const Discretization& disc);
double source_norm(const Discretization& disc);

struct NormCheck {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    double margin() const { return limit - value; }
    bool holds() const { return value <= limit; }
};

/// ||B||, ||C||, ||D - I|| and ||b|| against their limits in terms of C.
std::vector<NormCheck> block_norm_check(const ProjectedBlocks& blocks, double C, int M, double delta,
                                        double inflow_norm, double source_norm);

/// ||tau||_inf at interface f: the contribution of non-centered unselected
/// basis functions of the full solution, dropped by the adaptive conditions.
double tau_probe(const Discretization& disc, const SolutionField& full, const SelectionResult& sel, int f);

/// Grid for the assumption studies. Orders are per-quadrant counts M.
struct StudyGrid {
    std::vector<double> gammas{0.1, 0.3, 0.5, 0.7, 0.9, 0.99};
    std::vector<std::pair<double, double>> g_pairs{{0.0, 0.0}};
    std::vector<int> Ms{3, 6};
    std::vector<double> sigma_ts{1.0, 10.0, 1000.0};
    std::vector<double> deltas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 0.0};
    double h = 1.0 / 32.0;
};

/// Quadrature order N with N(N+2)/8 = M; throws ConfigError otherwise.
int order_for_M(int M);

struct RankRatioRow {
    double gamma_minus = 0, gamma_plus = 0, g_minus = 0, g_plus = 0;
    int fourM = 0;
    double rank_ratio = 0;  // vertical interior edge
};

struct BoundaryRankRow {
    double gamma = 0, g = 0;
    int fourM = 0;
    double rank_ratio = 0;  // min over the four walls
};

/// Numerical rank (SVD, threshold 1e-10 sigma_max) over column count.
double rank_ratio(const Eigen::MatrixXd& vectors);

std::vector<RankRatioRow> rank_ratio_study(const StudyGrid& grid);
std::vector<BoundaryRankRow> boundary_rank_study(const StudyGrid& grid);

struct C2Row {
    double gamma_minus = 0, gamma_plus = 0, g_minus = 0, g_plus = 0;
    int fourM = 0;
    double max_inv_norm2 = 0;  // vertical edge, max over the delta and sigma_t grids
};

std::vector<C2Row> c2_sweep(const StudyGrid& grid);

void write_rank_ratio_csv(std::ostream& out, const std::vector<RankRatioRow>& rows);
void write_boundary_rank_csv(std::ostream& out, const std::vector<BoundaryRankRow>& rows);
void write_c2_csv(std::ostream& out, const std::vector<C2Row>& rows);

}  // namespace arte
