#pragma once

#include <vector>

namespace arte {

/// Edge of a cell.
enum class Side { Left, Right, Bottom, Top };

Side opposite(Side side);

enum class InterfaceKind { Interior, Boundary };
enum class Orientation { Vertical, Horizontal };

/// Axis-aligned cell [xl, xr] x [yb, yt].
struct CellGeometry {
    double xl = 0.0, xr = 0.0, yb = 0.0, yt = 0.0;

    double x_center() const { return 0.5 * (xl + xr); }
    double y_center() const { return 0.5 * (yb + yt); }
    double width() const { return xr - xl; }
    bool contains(double x, double y, double tol = 1e-12) const;
};

/// Cell edge shared by two cells, or lying on the domain boundary.
///
/// Interior: `minus` is the left (vertical) or lower (horizontal) cell and
/// `plus` the right or upper one. Boundary: `minus` is the only cell, `plus`
/// is -1 and `wall` is the side of that cell lying on the boundary.
struct Interface {
    InterfaceKind kind = InterfaceKind::Interior;
    Orientation orientation = Orientation::Vertical;
    double x_mid = 0.0;
    double y_mid = 0.0;
    int minus = -1;
    int plus = -1;
    Side wall = Side::Left;
    double nx = 0.0;  // outward unit normal (boundary only)
    double ny = 0.0;

    bool interior() const { return kind == InterfaceKind::Interior; }
    /// Which side of `cell` this interface is.
    Side side_in(int cell) const;
};

/// Uniform I x I mesh on the unit square.
///
/// Cells are C_{i,j} = [x_{i-1}, x_i] x [y_{j-1}, y_j] with i along x and j
/// along y; the flat cell id is (j-1)*I + (i-1). Interface order: interior
/// vertical, interior horizontal, then boundary walls left, right, bottom,
/// top; each group sweeps its cells in id order.
struct Mesh {
    int cells_per_side = 0;
    double h = 0.0;
    std::vector<Interface> interfaces;
    int interior_count = 0;

    int cell_count() const { return cells_per_side * cells_per_side; }
    int cell_id(int i, int j) const { return (j - 1) * cells_per_side + (i - 1); }
    int cell_i(int id) const { return id % cells_per_side + 1; }
    int cell_j(int id) const { return id / cells_per_side + 1; }
    CellGeometry geometry(int id) const;
    /// Cell containing (x, y); points on shared edges go to the higher index.
    int locate(double x, double y) const;
};

Mesh build_mesh(int cells_per_side);

/// Split of a cell's 8M basis indices (0-based) relative to one of its edges.
///
/// Index layout: [0, 2M) x-family anchored left, [2M, 4M) anchored right,
/// [4M, 6M) y-family anchored bottom, [6M, 8M) anchored top.
struct BasisPartition {
    std::vector<int> centered;
    std::vector<int> opposite;
    std::vector<int> perpendicular;
};

BasisPartition partition_basis(Side edge, int M);

/// Edge on which basis index k attains its maximum.
Side anchor_side(int k, int M);

}  // namespace arte
