#include "arte/assembly.hpp"

#include <numeric>
#include <ostream>

#include <fmt/format.h>

#include "arte/errors.hpp"
#include "arte/parallel.hpp"

namespace arte {

ColumnMap ColumnMap::full(int cells, int per_cell) {
    ColumnMap map;
    map.offset.resize(cells);
    map.column.resize(cells);
    for (int c = 0; c < cells; ++c) {
        map.offset[c] = c * per_cell;
        map.column[c].resize(per_cell);
        std::iota(map.column[c].begin(), map.column[c].end(), c * per_cell);
    }
    map.size = cells * per_cell;
    return map;
}

ColumnMap ColumnMap::from_selection(const SelectionResult& sel, bool selected) {
    ColumnMap map;
    const int cells = static_cast<int>(sel.cells.size());
    map.offset.resize(cells);
    map.column.resize(cells);
    int next = 0;
    for (int c = 0; c < cells; ++c) {
        const auto& cs = sel.cells[c];
        map.offset[c] = next;
        map.column[c].assign(cs.mask.size(), -1);
        for (int k : selected ? cs.selected : cs.unselected) map.column[c][k] = next++;
    }
    map.size = next;
    return map;
}

Eigen::SparseMatrix<double> SparseSystem::matrix() const {
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return a;
}

Eigen::SparseMatrix<double, Eigen::RowMajor> SparseSystem::crs() const {
    Eigen::SparseMatrix<double, Eigen::RowMajor> a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    return a;
}

namespace {

// Dense block of the conditions at one interface: one row per participating
// ordinate, one column per basis function of the adjacent cells (C- first,
// all 8M each), plus the right-hand side.
struct LocalRows {
    std::vector<ModeRef> cols;
    Eigen::MatrixXd values;
    Eigen::VectorXd rhs;
};

LocalRows interface_rows(const Discretization& disc, int f) {
    const auto& face = disc.mesh.interfaces[f];
    const auto& rows = disc.rows(f);
    const int d = static_cast<int>(rows.size());
    const int per_cell = 8 * disc.M();
    std::vector<int> cells{face.minus};
    if (face.interior()) cells.push_back(face.plus);

    LocalRows out;
    out.values.resize(d, per_cell * static_cast<int>(cells.size()));
    int col = 0;
    for (int c : cells) {
        const auto& basis = disc.bases[c];
        const Side side = face.side_in(c);
        const double sign = c == face.minus ? 1.0 : -1.0;
        for (int k = 0; k < per_cell; ++k, ++col) {
            out.cols.push_back({c, k});
            const double scale = sign * basis.zeta_edge(k, side);
            const auto xi = basis.xi(k);
            for (int r = 0; r < d; ++r) out.values(r, col) = scale * xi(rows[r]);
        }
    }
    if (face.interior()) {
        out.rhs = Eigen::VectorXd::Constant(d, disc.source_ratio(face.plus) - disc.source_ratio(face.minus));
    } else {
        out.rhs.resize(d);
        const double s = disc.source_ratio(face.minus);
        for (int r = 0; r < d; ++r) {
            out.rhs(r) = disc.inflow(face.x_mid, face.y_mid, disc.quad.directions[rows[r]], rows[r]) - s;
        }
    }
    return out;
}

void emit(std::vector<Eigen::Triplet<double>>& trip, int row, const Eigen::RowVectorXd& values,
          const std::vector<ModeRef>& cols, const ColumnMap& map) {
    for (Eigen::Index n = 0; n < values.size(); ++n) {
        const int c = map.at(cols[n].cell, cols[n].k);
        if (c >= 0 && values(n) != 0.0) trip.emplace_back(row, c, values(n));
    }
}

struct Block {
    std::vector<Eigen::Triplet<double>> trip;
};

// Runs `body(f, triplets)` per interface in parallel and concatenates the
// triplet streams in interface order.
template <class Body>
std::vector<Eigen::Triplet<double>> per_interface(std::size_t count, Body&& body) {
    std::vector<Block> blocks(count);
    parallel_for(count, [&](std::size_t f) { body(static_cast<int>(f), blocks[f].trip); });
    std::size_t total = 0;
    for (const auto& b : blocks) total += b.trip.size();
    std::vector<Eigen::Triplet<double>> out;
    out.reserve(total);
    for (auto& b : blocks) out.insert(out.end(), b.trip.begin(), b.trip.end());
    return out;
}

}  // namespace

SparseSystem assemble_full(const Discretization& disc) {
    const auto& faces = disc.mesh.interfaces;
    SparseSystem sys;
    sys.columns = ColumnMap::full(disc.cell_count(), 8 * disc.M());
    sys.n = sys.columns.size;

    std::vector<int> first(faces.size() + 1, 0);
    for (std::size_t f = 0; f < faces.size(); ++f) first[f + 1] = first[f] + static_cast<int>(disc.rows(f).size());
    if (first.back() != sys.n) throw CountMismatch(fmt::format("full system has {} rows for {} unknowns", first.back(), sys.n));
    sys.rhs.resize(sys.n);
    sys.rows.resize(sys.n);

    sys.triplets = per_interface(faces.size(), [&](int f, auto& trip) {
        const LocalRows local = interface_rows(disc, f);
        for (Eigen::Index r = 0; r < local.values.rows(); ++r) {
            const int row = first[f] + static_cast<int>(r);
            emit(trip, row, local.values.row(r), local.cols, sys.columns);
            sys.rhs(row) = local.rhs(r);
            sys.rows[row] = {f, disc.rows(f)[r]};
        }
    });
    return sys;
}

SparseSystem assemble_adaptive(const Discretization& disc, const SelectionResult& sel, const InterfaceSpaces& spaces) {
    const auto& faces = disc.mesh.interfaces;
    SparseSystem sys;
    sys.columns = ColumnMap::from_selection(sel);
    sys.n = sys.columns.size;

    std::vector<int> first(faces.size() + 1, 0);
    for (std::size_t f = 0; f < faces.size(); ++f) first[f + 1] = first[f] + spaces[f].n_selected();
    if (first.back() != sys.n) {
        throw CountMismatch(fmt::format("adaptive system has {} rows for {} unknowns", first.back(), sys.n));
    }
    sys.rhs.resize(sys.n);
    sys.rows.resize(sys.n);

    sys.triplets = per_interface(faces.size(), [&](int f, auto& trip) {
        const LocalRows local = interface_rows(disc, f);
        const int ns = spaces[f].n_selected();
        if (ns == 0) return;
        const Eigen::MatrixXd y = spaces[f].frame->coords(local.values);
        const Eigen::VectorXd yr = spaces[f].coords(local.rhs);
        for (int r = 0; r < ns; ++r) {
            const int row = first[f] + r;
            emit(trip, row, y.row(r), local.cols, sys.columns);
            sys.rhs(row) = yr(r);
            sys.rows[row] = {f, r};
        }
    });
    return sys;
}

ProjectedBlocks assemble_projected_full(const Discretization& disc, const SelectionResult& sel,
                                        const InterfaceSpaces& spaces) {
    const auto& faces = disc.mesh.interfaces;
    ProjectedBlocks out;
    out.selected_columns = ColumnMap::from_selection(sel, true);
    out.unselected_columns = ColumnMap::from_selection(sel, false);
    const int ns_total = out.selected_columns.size;
    const int nu_total = out.unselected_columns.size;

    std::vector<int> first(faces.size() + 1, 0);
    for (std::size_t f = 0; f < faces.size(); ++f) first[f + 1] = first[f] + spaces[f].n_selected();
    if (first.back() != ns_total) throw CountMismatch("selected rows do not match selected unknowns");

    struct Local {
        std::vector<Eigen::Triplet<double>> a, b, c, d;
    };
    std::vector<Local> locals(faces.size());
    out.b.resize(ns_total);
    out.d.resize(nu_total);
    std::vector<int> seen(nu_total, 0);

    parallel_for(faces.size(), [&](std::size_t n) {
        const int f = static_cast<int>(n);
        const auto& space = spaces[f];
        const LocalRows local = interface_rows(disc, f);
        const Eigen::MatrixXd y = space.frame->coords(local.values);
        const Eigen::VectorXd yr = space.coords(local.rhs);
        const int ns = space.n_selected();
        const int nu = space.dim() - ns;
        auto& L = locals[f];
        for (int r = 0; r < ns; ++r) {
            emit(L.a, first[f] + r, y.row(r), local.cols, out.selected_columns);
            emit(L.b, first[f] + r, y.row(r), local.cols, out.unselected_columns);
            out.b(first[f] + r) = yr(r);
        }
        if (nu == 0) return;

        // Re-express the unselected coordinates in the basis of the signed
        // unselected centered eigenvectors: G holds their current coordinates.
        Eigen::MatrixXd g(nu, nu);
        const int per_cell = 8 * disc.M();
        const int minus = disc.mesh.interfaces[f].minus;
        for (int u = 0; u < nu; ++u) {
            const auto& ref = space.unselected[u];
            const int col = (ref.cell == minus ? 0 : per_cell) + ref.k;
            g.col(u) = y.col(col).tail(nu);
        }
        Eigen::PartialPivLU<Eigen::MatrixXd> glu(g);
        const Eigen::MatrixXd z = glu.solve(y.bottomRows(nu));
        const Eigen::VectorXd zr = glu.solve(yr.tail(nu));
        for (int u = 0; u < nu; ++u) {
            const auto& ref = space.unselected[u];
            const int row = out.unselected_columns.at(ref.cell, ref.k);
            emit(L.c, row, z.row(u), local.cols, out.selected_columns);
            emit(L.d, row, z.row(u), local.cols, out.unselected_columns);
            out.d(row) = zr(u);
            seen[row] += 1;
        }
    });
    for (int r = 0; r < nu_total; ++r) {
        if (seen[r] != 1) throw CountMismatch(fmt::format("unselected unknown {} has {} conditions", r, seen[r]));
    }

    auto build = [&](auto member, int rows, int cols) {
        std::vector<Eigen::Triplet<double>> t;
        for (auto& L : locals) t.insert(t.end(), (L.*member).begin(), (L.*member).end());
        Eigen::SparseMatrix<double> m(rows, cols);
        m.setFromTriplets(t.begin(), t.end());
        m.makeCompressed();
        return m;
    };
    out.A = build(&Local::a, ns_total, ns_total);
    out.B = build(&Local::b, ns_total, nu_total);
    out.C = build(&Local::c, nu_total, ns_total);
    out.D = build(&Local::d, nu_total, nu_total);
    return out;
}

Eigen::SparseMatrix<double> ProjectedBlocks::assembled() const {
    const Eigen::Index ns = A.rows();
    const Eigen::Index n = ns + D.rows();
    std::vector<Eigen::Triplet<double>> t;
    auto add = [&](const Eigen::SparseMatrix<double>& m, Eigen::Index r0, Eigen::Index c0) {
        for (int k = 0; k < m.outerSize(); ++k) {
            for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
                t.emplace_back(static_cast<int>(r0 + it.row()), static_cast<int>(c0 + it.col()), it.value());
            }
        }
    };
    add(A, 0, 0);
    add(B, 0, ns);
    add(C, ns, 0);
    add(D, ns, ns);
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

Eigen::VectorXd ProjectedBlocks::assembled_rhs() const {
    Eigen::VectorXd r(b.size() + d.size());
    r << b, d;
    return r;
}

void write_matrix_market(std::ostream& out, const SparseSystem& system) {
    const auto m = system.crs();
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << fmt::format("{} {} {}\n", m.rows(), m.cols(), m.nonZeros());
    for (int r = 0; r < m.outerSize(); ++r) {
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(m, r); it; ++it) {
            out << fmt::format("{} {} {:.17g}\n", it.row() + 1, it.col() + 1, it.value());
        }
    }
}

void write_rhs(std::ostream& out, const SparseSystem& system) {
    for (Eigen::Index r = 0; r < system.rhs.size(); ++r) out << fmt::format("{:.17g}\n", system.rhs(r));
}

}  // namespace arte
