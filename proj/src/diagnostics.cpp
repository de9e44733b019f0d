#include "arte/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "arte/errors.hpp"
#include "arte/log.hpp"
#include "arte/parallel.hpp"

namespace arte {

double inflow_norm(const Discretization& disc) {
    double n = 0.0;
    const auto& faces = disc.mesh.interfaces;
    for (std::size_t f = disc.mesh.interior_count; f < faces.size(); ++f) {
        for (int m : disc.rows(f)) {
            n = std::max(n, std::abs(disc.inflow(faces[f].x_mid, faces[f].y_mid, disc.quad.directions[m], m)));
        }
    }
    return n;
}

double source_norm(const Discretization& disc) {
    double n = 0.0;
    for (int c = 0; c < disc.cell_count(); ++c) n = std::max(n, std::abs(disc.source_ratio(c)));
    return n;
}

PosteriorReport posterior_bound(const Discretization& disc, const AdaptiveSolve& adaptive) {
    PosteriorReport r;
    r.M = disc.M();
    r.delta = adaptive.selection.delta;
    for (const auto& s : adaptive.spaces) {
        r.C_inf = std::max(r.C_inf, s.frame->inv_norm_inf);
        r.C_2 = std::max(r.C_2, s.frame->inv_norm_2);
        r.C_generator = std::max(r.C_generator, s.frame->generator_inv_norm_inf);
    }
    r.C_bound = std::max(r.C_inf, r.C_generator);
    const auto est = inv_inf_norm_estimate(*adaptive.factors);
    r.inv_norm_estimate = est.value;
    r.estimator_probes = est.probes;
    r.coeff_norm = adaptive.x.size() ? adaptive.x.lpNorm<Eigen::Infinity>() : 0.0;
    r.inflow_norm = inflow_norm(disc);
    r.source_norm = source_norm(disc);

    const double M = r.M;
    const double C = r.C_bound;
    r.delta0 = 1.0 / (24.0 * M * C * (24.0 * M * C * r.inv_norm_estimate + 1.0));
    r.above_delta0 = r.delta > r.delta0;
    r.bound = 96.0 * M * M * (24.0 * M * C * r.inv_norm_estimate + 3.0) * C * C * r.delta *
              (r.inflow_norm + 2.0 * r.source_norm + 12.0 * M * r.coeff_norm);
    return r;
}

namespace {
double sparse_inf_norm(const Eigen::SparseMatrix<double>& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
    for (int k = 0; k < m.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) rows(it.row()) += std::abs(it.value());
    }
    return rows.maxCoeff();
}
}  // namespace

std::vector<NormCheck> block_norm_check(const ProjectedBlocks& blocks, double C, int M, double delta,
                                        double inflow_norm, double source_norm) {
    Eigen::SparseMatrix<double> identity(blocks.D.rows(), blocks.D.cols());
    identity.setIdentity();
    const double b = blocks.b.size() ? blocks.b.lpNorm<Eigen::Infinity>() : 0.0;
    return {
        {"B", sparse_inf_norm(blocks.B), 12.0 * M * C * delta},
        {"C", sparse_inf_norm(blocks.C), 12.0 * M * C},
        {"D-I", sparse_inf_norm(blocks.D - identity), 12.0 * M * C * delta},
        {"b", b, C * (2.0 * source_norm + inflow_norm)},
    };
}

double tau_probe(const Discretization& disc, const SolutionField& full, const SelectionResult& sel, int f) {
    const auto& face = disc.mesh.interfaces[f];
    const auto& rows = disc.rows(f);
    Eigen::VectorXd tau = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows.size()));
    std::vector<int> cells{face.minus};
    if (face.interior()) cells.push_back(face.plus);
    for (int c : cells) {
        const Side side = face.side_in(c);
        const double sign = c == face.minus ? -1.0 : 1.0;
        const auto& basis = disc.bases[c];
        for (int k : sel.cells[c].unselected) {
            if (basis.anchor(k) == side) continue;
            const double scale = sign * full.coeffs[c](k) * basis.zeta_edge(k, side);
            const auto xi = basis.xi(k);
            for (std::size_t r = 0; r < rows.size(); ++r) tau(r) += scale * xi(rows[r]);
        }
    }
    return tau.size() ? tau.lpNorm<Eigen::Infinity>() : 0.0;
}

int order_for_M(int M) {
    for (int N = 2; N <= 24; N += 2) {
        if (N * (N + 2) == 8 * M) return N;
    }
    throw ConfigError(fmt::format("no S_N set has M = {} directions per quadrant", M), "SchemaError");
}

double rank_ratio(const Eigen::MatrixXd& vectors) {
    if (vectors.cols() == 0) return 1.0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(vectors);
    const auto& sv = svd.singularValues();
    const double cut = 1e-10 * sv(0);
    const auto rank = (sv.array() > cut).count();
    return static_cast<double>(rank) / static_cast<double>(vectors.cols());
}

namespace {

struct Pair {
    MediumSpectrum minus, plus;
    int M;
};

struct GridPoint {
    double gm, gp, am, ap;
    int M;
};

std::vector<GridPoint> points(const StudyGrid& grid) {
    std::vector<GridPoint> out;
    for (int M : grid.Ms) {
        for (auto [am, ap] : grid.g_pairs) {
            for (double gm : grid.gammas) {
                for (double gp : grid.gammas) out.push_back({gm, gp, am, ap, M});
            }
        }
    }
    return out;
}

// Centered eigenvectors of a two-cell interface: C- contributes its basis
// anchored on the shared edge, then C+.
Eigen::MatrixXd stacked(const CellBasis& minus, const CellBasis& plus, Orientation o) {
    const int M = minus.M();
    const Side sm = o == Orientation::Vertical ? Side::Right : Side::Top;
    Eigen::MatrixXd v(4 * M, 4 * M);
    int col = 0;
    for (int k : partition_basis(sm, M).centered) v.col(col++) = minus.xi(k);
    for (int k : partition_basis(opposite(sm), M).centered) v.col(col++) = plus.xi(k);
    return v;
}

CellBasis basis_for(BasisCache& cache, double sigma_t, double gamma, double g, double h) {
    const CellMedium med{sigma_t, gamma * sigma_t, g, 0.0};
    return CellBasis(cache.spectrum(med), CellGeometry{0.0, h, 0.0, h});
}

}  // namespace

std::vector<RankRatioRow> rank_ratio_study(const StudyGrid& grid) {
    const auto pts = points(grid);
    std::vector<RankRatioRow> rows(pts.size());
    for (int M : grid.Ms) {
        const auto quad = build_quadrature(order_for_M(M));
        BasisCache cache(quad);
        parallel_for(pts.size(), [&](std::size_t n) {
            const auto& p = pts[n];
            if (p.M != M) return;
            const auto a = basis_for(cache, 1.0, p.gm, p.am, grid.h);
            const auto b = basis_for(cache, 1.0, p.gp, p.ap, grid.h);
            rows[n] = {p.gm, p.gp, p.am, p.ap, 4 * M, rank_ratio(stacked(a, b, Orientation::Vertical))};
        });
    }
    return rows;
}

std::vector<BoundaryRankRow> boundary_rank_study(const StudyGrid& grid) {
    std::vector<BoundaryRankRow> rows;
    std::vector<double> gs;
    for (auto [a, b] : grid.g_pairs) {
        for (double g : {a, b}) {
            if (std::ranges::find(gs, g) == gs.end()) gs.push_back(g);
        }
    }
    for (int M : grid.Ms) {
        const auto quad = build_quadrature(order_for_M(M));
        BasisCache cache(quad);
        for (double g : gs) {
            for (double gamma : grid.gammas) {
                const auto basis = basis_for(cache, 1.0, gamma, g, grid.h);
                double r = 1.0;
                for (auto [side, nx, ny] : {std::tuple{Side::Left, -1.0, 0.0}, {Side::Right, 1.0, 0.0},
                                            {Side::Bottom, 0.0, -1.0}, {Side::Top, 0.0, 1.0}}) {
                    const auto in = inflow_ordinates(quad, nx, ny);
                    const auto centered = partition_basis(side, M).centered;
                    Eigen::MatrixXd v(in.size(), centered.size());
                    for (std::size_t c = 0; c < centered.size(); ++c) {
                        for (std::size_t m = 0; m < in.size(); ++m) v(m, c) = basis.xi(centered[c])(in[m]);
                    }
                    r = std::min(r, rank_ratio(v));
                }
                rows.push_back({gamma, g, 4 * M, r});
            }
        }
    }
    return rows;
}

std::vector<C2Row> c2_sweep(const StudyGrid& grid) {
    const auto pts = points(grid);
    std::vector<C2Row> rows(pts.size());
    for (int M : grid.Ms) {
        const auto quad = build_quadrature(order_for_M(M));
        BasisCache cache(quad);
        parallel_for(pts.size(), [&](std::size_t n) {
            const auto& p = pts[n];
            if (p.M != M) return;
            double worst = 0.0;
            for (double st : grid.sigma_ts) {
                const auto a = basis_for(cache, st, p.gm, p.am, grid.h);
                const auto b = basis_for(cache, st, p.gp, p.ap, grid.h);
                for (double delta : grid.deltas) {
                    const auto sa = select_basis(a, grid.h, delta);
                    const auto sb = select_basis(b, grid.h, delta);
                    std::vector<Eigen::VectorXd> sel, unsel;
                    for (int k : partition_basis(Side::Right, M).centered) (sa.contains(k) ? sel : unsel).push_back(a.xi(k));
                    for (int k : partition_basis(Side::Left, M).centered) (sb.contains(k) ? sel : unsel).push_back(b.xi(k));
                    auto pack = [&](const std::vector<Eigen::VectorXd>& cols) {
                        Eigen::MatrixXd m(4 * M, cols.size());
                        for (std::size_t c = 0; c < cols.size(); ++c) m.col(c) = cols[c];
                        return m;
                    };
                    try {
                        worst = std::max(worst, build_frame(pack(sel), pack(unsel)).inv_norm_2);
                    } catch (const NumericalError& e) {
                        log().warn("c2 sweep: {} at gamma=({}, {}), delta={}", e.what(), p.gm, p.gp, delta);
                        worst = std::numeric_limits<double>::infinity();
                    }
                }
            }
            rows[n] = {p.gm, p.gp, p.am, p.ap, 4 * M, worst};
        });
    }
    return rows;
}

void write_rank_ratio_csv(std::ostream& out, const std::vector<RankRatioRow>& rows) {
    out << "gamma_minus,gamma_plus,g_minus,g_plus,fourM,rank_ratio\n";
    for (const auto& r : rows) {
        out << fmt::format("{:g},{:g},{:g},{:g},{},{:.17g}\n", r.gamma_minus, r.gamma_plus, r.g_minus, r.g_plus, r.fourM,
                           r.rank_ratio);
    }
}

void write_boundary_rank_csv(std::ostream& out, const std::vector<BoundaryRankRow>& rows) {
    out << "gamma,g,fourM,rank_ratio\n";
    for (const auto& r : rows) out << fmt::format("{:g},{:g},{},{:.17g}\n", r.gamma, r.g, r.fourM, r.rank_ratio);
}

void write_c2_csv(std::ostream& out, const std::vector<C2Row>& rows) {
    out << "gamma_minus,gamma_plus,g_minus,g_plus,fourM,max_inv_norm2\n";
    for (const auto& r : rows) {
        out << fmt::format("{:g},{:g},{:g},{:g},{},{:.17g}\n", r.gamma_minus, r.gamma_plus, r.g_minus, r.g_plus, r.fourM,
                           r.max_inv_norm2);
    }
}

}  // namespace arte
