#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "arte/discretization.hpp"

namespace arte {

/// Basis indices of one cell split by the decay threshold.
struct CellSelection {
    std::vector<char> mask;        // mask[k] != 0 iff k is selected
    std::vector<int> selected;     // ascending
    std::vector<int> unselected;   // ascending

    bool contains(int k) const { return mask[k] != 0; }
};

/// Keeps k iff exp(-|lambda_k| sigma_t h / 2) > delta. delta = 0 keeps all.
CellSelection select_basis(const CellBasis& basis, double h, double delta);

struct SelectionResult {
    double delta = 0.0;
    std::vector<CellSelection> cells;

    long selected_count() const;
    long total_count() const;
    /// Fraction of basis functions kept, in (0, 1].
    double ratio() const;
};

SelectionResult select_all(const Discretization& disc, double delta);

/// A generating vector of an interface space: centered basis k of `cell`.
struct ModeRef {
    int cell = -1;
    int k = -1;
};

/// Coordinate system for the conditions at one interface.
///
/// The first `n_selected` columns of E are an orthonormal basis of the span
/// of the selected centered eigenvectors; the remaining columns are an
/// orthonormal basis of the unselected ones. Vectors live in R^d with d the
/// number of ordinates taking part in the interface conditions.
struct InterfaceFrame {
    int dim = 0;
    int n_selected = 0;
    Eigen::MatrixXd E;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    double inv_norm_inf = 0.0;  // ||E^{-1}||_inf
    double inv_norm_2 = 0.0;    // ||E^{-1}||_2
    double condition = 0.0;     // 2-norm condition number of E
    /// ||[Q_sel, unselected eigenvectors]^{-1}||_inf: the coordinate map used
    /// by the projected full system.
    double generator_inv_norm_inf = 0.0;

    /// y with E y = l.
    Eigen::VectorXd coords(const Eigen::VectorXd& l) const { return lu.solve(l); }
    Eigen::MatrixXd coords(const Eigen::MatrixXd& l) const { return lu.solve(l); }
    /// Oblique projection onto the selected family along the unselected one.
    Eigen::VectorXd project(const Eigen::VectorXd& l) const;
};

/// Builds a frame from explicit generator matrices (columns). Throws
/// RankDeficient or SingularE.
InterfaceFrame build_frame(const Eigen::MatrixXd& selected_generators, const Eigen::MatrixXd& unselected_generators);

/// Frame plus the identity of each generating vector at one interface.
struct InterfaceSpace {
    int interface = -1;
    std::vector<ModeRef> selected;    // C- then C+, ascending k
    std::vector<ModeRef> unselected;  // same order
    std::shared_ptr<const InterfaceFrame> frame;

    int dim() const { return frame->dim; }
    int n_selected() const { return frame->n_selected; }
    Eigen::VectorXd coords(const Eigen::VectorXd& l) const { return frame->coords(l); }
    Eigen::VectorXd project(const Eigen::VectorXd& l) const { return frame->project(l); }
};

/// Restriction of basis k of `cell` to the ordinates of interface `f`.
Eigen::VectorXd restricted_xi(const Discretization& disc, int f, int cell, int k);

/// Orthonormalizes the generating vectors of interface `f` (C- then C+,
/// ascending k). Throws RankDeficient or SingularE; warns on cond(E) > 1e6.
InterfaceSpace build_interface_space(const Discretization& disc, const SelectionResult& sel, int f);

using InterfaceSpaces = std::vector<InterfaceSpace>;

/// All interface spaces, built in parallel. Interfaces whose adjacent cells
/// share spectra and selections share one frame.
InterfaceSpaces build_interface_spaces(const Discretization& disc, const SelectionResult& sel);

/// CSV `i,j,n_selected`.
void write_selection_csv(std::ostream& out, const Discretization& disc, const SelectionResult& sel);

}  // namespace arte
