#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Sparse>

#include "arte/discretization.hpp"
#include "arte/reduction.hpp"

namespace arte {

/// Column layout: cells in id order, then ascending basis index.
struct ColumnMap {
    std::vector<int> offset;               // first column of each cell
    std::vector<std::vector<int>> column;  // column[cell][k], -1 if inactive
    int size = 0;

    int at(int cell, int k) const { return column[cell][k]; }

    /// All 8M basis functions of every cell.
    static ColumnMap full(int cells, int per_cell);
    /// The selected (or unselected) basis functions of each cell.
    static ColumnMap from_selection(const SelectionResult& sel, bool selected = true);
};

/// Origin of one row: an interface and either an ordinate (full system) or
/// a position in the interface's mode list.
struct RowLabel {
    int interface = -1;
    int mode = -1;
};

struct SparseSystem {
    int n = 0;
    std::vector<Eigen::Triplet<double>> triplets;
    Eigen::VectorXd rhs;
    ColumnMap columns;
    std::vector<RowLabel> rows;

    /// Column-major matrix (input to the sparse LU).
    Eigen::SparseMatrix<double> matrix() const;
    /// Compressed row storage.
    Eigen::SparseMatrix<double, Eigen::RowMajor> crs() const;
};

/// Componentwise interface continuity and boundary inflow conditions on the
/// complete basis; 8MI^2 rows and unknowns.
SparseSystem assemble_full(const Discretization& disc);

/// Conditions projected on the selected interface modes, unknowns restricted
/// to the selected basis. Throws CountMismatch if rows != columns.
SparseSystem assemble_adaptive(const Discretization& disc, const SelectionResult& sel,
                               const InterfaceSpaces& spaces);

/// Full system written in interface-mode coordinates, split by selected and
/// unselected unknowns and conditions.
///
/// Selected rows use the orthonormal coordinates of the adaptive system, so
/// `A` equals the adaptive matrix. Unselected rows are expressed in the
/// basis of the unselected centered eigenvectors themselves; row r of the
/// unselected block belongs to unselected unknown r, which makes the
/// centered part of `D` exactly the identity.
struct ProjectedBlocks {
    Eigen::SparseMatrix<double> A, B, C, D;
    Eigen::VectorXd b, d;
    ColumnMap selected_columns;
    ColumnMap unselected_columns;

    /// [A B; C D] and [b; d].
    Eigen::SparseMatrix<double> assembled() const;
    Eigen::VectorXd assembled_rhs() const;
};

ProjectedBlocks assemble_projected_full(const Discretization& disc, const SelectionResult& sel,
                                        const InterfaceSpaces& spaces);

/// Matrix Market coordinate format, real general, 1-based.
void write_matrix_market(std::ostream& out, const SparseSystem& system);
/// One rhs value per line.
void write_rhs(std::ostream& out, const SparseSystem& system);

}  // namespace arte
