#include "arte/discretization.hpp"

#include <fmt/format.h>

#include "arte/errors.hpp"
#include "arte/parallel.hpp"

namespace arte {

Discretization discretize(int cells_per_side, int order, std::vector<CellMedium> media, InflowFn inflow) {
    Discretization d;
    d.quad = build_quadrature(order);
    d.mesh = build_mesh(cells_per_side);
    if (static_cast<int>(media.size()) != d.mesh.cell_count()) {
        throw ConfigError(fmt::format("expected {} cell media, got {}", d.mesh.cell_count(), media.size()));
    }
    for (std::size_t c = 0; c < media.size(); ++c) {
        try {
            validate(media[c]);
        } catch (const DegenerateMedium& e) {
            throw DegenerateMedium(fmt::format("cell {}: {}", c, e.what()));
        }
    }
    d.media = std::move(media);
    d.inflow = std::move(inflow);

    BasisCache cache(d.quad);
    d.bases.resize(d.media.size());
    parallel_for(d.media.size(), [&](std::size_t c) {
        d.bases[c] = CellBasis(cache.spectrum(d.media[c]), d.mesh.geometry(static_cast<int>(c)));
    });

    std::vector<int> all(d.quad.size());
    for (int m = 0; m < d.quad.size(); ++m) all[m] = m;
    d.interface_rows_.reserve(d.mesh.interfaces.size());
    for (const auto& f : d.mesh.interfaces) {
        d.interface_rows_.push_back(f.interior() ? all : inflow_ordinates(d.quad, f.nx, f.ny));
    }
    return d;
}

}  // namespace arte
