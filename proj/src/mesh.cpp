#include "arte/mesh.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "arte/errors.hpp"

namespace arte {

Side opposite(Side side) {
    switch (side) {
        case Side::Left: return Side::Right;
        case Side::Right: return Side::Left;
        case Side::Bottom: return Side::Top;
        case Side::Top: return Side::Bottom;
    }
    return Side::Left;
}

bool CellGeometry::contains(double x, double y, double tol) const {
    return x >= xl - tol && x <= xr + tol && y >= yb - tol && y <= yt + tol;
}

Side Interface::side_in(int cell) const {
    if (kind == InterfaceKind::Boundary) return wall;
    if (orientation == Orientation::Vertical) return cell == minus ? Side::Right : Side::Left;
    return cell == minus ? Side::Top : Side::Bottom;
}

CellGeometry Mesh::geometry(int id) const {
    const int i = cell_i(id);
    const int j = cell_j(id);
    return {(i - 1) * h, i * h, (j - 1) * h, j * h};
}

int Mesh::locate(double x, double y) const {
    const int n = cells_per_side;
    const int i = std::clamp(static_cast<int>(x / h), 0, n - 1) + 1;
    const int j = std::clamp(static_cast<int>(y / h), 0, n - 1) + 1;
    return cell_id(i, j);
}

Mesh build_mesh(int cells_per_side) {
    if (cells_per_side < 1) {
        throw ConfigError(fmt::format("mesh needs I >= 1, got {}", cells_per_side));
    }
    Mesh mesh;
    const int n = cells_per_side;
    mesh.cells_per_side = n;
    mesh.h = 1.0 / n;
    const double h = mesh.h;

    for (int j = 1; j <= n; ++j) {
        for (int i = 1; i < n; ++i) {
            Interface f;
            f.orientation = Orientation::Vertical;
            f.x_mid = i * h;
            f.y_mid = (j - 0.5) * h;
            f.minus = mesh.cell_id(i, j);
            f.plus = mesh.cell_id(i + 1, j);
            mesh.interfaces.push_back(f);
        }
    }
    for (int j = 1; j < n; ++j) {
        for (int i = 1; i <= n; ++i) {
            Interface f;
            f.orientation = Orientation::Horizontal;
            f.x_mid = (i - 0.5) * h;
            f.y_mid = j * h;
            f.minus = mesh.cell_id(i, j);
            f.plus = mesh.cell_id(i, j + 1);
            mesh.interfaces.push_back(f);
        }
    }
    mesh.interior_count = static_cast<int>(mesh.interfaces.size());

    auto wall = [&](Side side, int i, int j, double x, double y, double nx, double ny) {
        Interface f;
        f.kind = InterfaceKind::Boundary;
        f.orientation =
            (side == Side::Left || side == Side::Right) ? Orientation::Vertical : Orientation::Horizontal;
        f.x_mid = x;
        f.y_mid = y;
        f.minus = mesh.cell_id(i, j);
        f.wall = side;
        f.nx = nx;
        f.ny = ny;
        mesh.interfaces.push_back(f);
    };
    for (int j = 1; j <= n; ++j) wall(Side::Left, 1, j, 0.0, (j - 0.5) * h, -1.0, 0.0);
    for (int j = 1; j <= n; ++j) wall(Side::Right, n, j, 1.0, (j - 0.5) * h, 1.0, 0.0);
    for (int i = 1; i <= n; ++i) wall(Side::Bottom, i, 1, (i - 0.5) * h, 0.0, 0.0, -1.0);
    for (int i = 1; i <= n; ++i) wall(Side::Top, i, n, (i - 0.5) * h, 1.0, 0.0, 1.0);
    return mesh;
}

namespace {
std::vector<int> block(Side side, int M) {
    int start = 0;
    switch (side) {
        case Side::Left: start = 0; break;
        case Side::Right: start = 2 * M; break;
        case Side::Bottom: start = 4 * M; break;
        case Side::Top: start = 6 * M; break;
    }
    std::vector<int> out(2 * M);
    for (int k = 0; k < 2 * M; ++k) out[k] = start + k;
    return out;
}
}  // namespace

BasisPartition partition_basis(Side edge, int M) {
    BasisPartition p;
    p.centered = block(edge, M);
    p.opposite = block(opposite(edge), M);
    const bool vertical_edge = edge == Side::Left || edge == Side::Right;
    auto a = block(vertical_edge ? Side::Bottom : Side::Left, M);
    auto b = block(vertical_edge ? Side::Top : Side::Right, M);
    p.perpendicular = a;
    p.perpendicular.insert(p.perpendicular.end(), b.begin(), b.end());
    return p;
}

Side anchor_side(int k, int M) {
    if (k < 2 * M) return Side::Left;
    if (k < 4 * M) return Side::Right;
    if (k < 6 * M) return Side::Bottom;
    return Side::Top;
}

}  // namespace arte
