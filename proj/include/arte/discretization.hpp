#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "arte/angular.hpp"
#include "arte/local_basis.hpp"
#include "arte/mesh.hpp"

namespace arte {

/// Inflow value Psi(x, y, u_m) on the domain boundary.
using InflowFn = std::function<double(double x, double y, const Direction& u, int m)>;

/// Everything that is independent of the compression threshold: quadrature,
/// mesh, per-cell media and eigenbases, and boundary data.
struct Discretization {
    QuadratureSet quad;
    Mesh mesh;
    std::vector<CellMedium> media;  // indexed by cell id
    std::vector<CellBasis> bases;   // indexed by cell id
    InflowFn inflow;

    int M() const { return quad.per_quadrant; }
    int cell_count() const { return mesh.cell_count(); }
    double source_ratio(int cell) const { return special_solution(media[cell]); }
    /// Ordinates taking part in the conditions at interface `f`: all of them
    /// for interior interfaces, the inflow ones for boundary interfaces.
    const std::vector<int>& rows(int f) const { return interface_rows_[f]; }

    std::vector<std::vector<int>> interface_rows_;
};

/// Builds bases for every cell (in parallel, spectra shared via the cache).
Discretization discretize(int cells_per_side, int order, std::vector<CellMedium> media, InflowFn inflow);

}  // namespace arte
