#include "arte/reduction.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>

#include <Eigen/QR>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "arte/errors.hpp"
#include "arte/log.hpp"
#include "arte/parallel.hpp"

namespace arte {

CellSelection select_basis(const CellBasis& basis, double h, double delta) {
    if (!(delta >= 0.0 && delta < 1.0)) throw ConfigError(fmt::format("delta must be in [0, 1), got {}", delta));
    CellSelection s;
    const int n = basis.size();
    s.mask.assign(n, 0);
    for (int k = 0; k < n; ++k) {
        const bool keep = delta == 0.0 || std::exp(-0.5 * std::abs(basis.lambda(k)) * basis.sigma_t() * h) > delta;
        s.mask[k] = keep;
        (keep ? s.selected : s.unselected).push_back(k);
    }
    return s;
}

long SelectionResult::selected_count() const {
    long n = 0;
    for (const auto& c : cells) n += static_cast<long>(c.selected.size());
    return n;
}

long SelectionResult::total_count() const {
    long n = 0;
    for (const auto& c : cells) n += static_cast<long>(c.mask.size());
    return n;
}

double SelectionResult::ratio() const {
    return static_cast<double>(selected_count()) / static_cast<double>(total_count());
}

SelectionResult select_all(const Discretization& disc, double delta) {
    SelectionResult r;
    r.delta = delta;
    r.cells.reserve(disc.bases.size());
    int empty = 0;
    for (const auto& b : disc.bases) {
        r.cells.push_back(select_basis(b, disc.mesh.h, delta));
        if (r.cells.back().selected.empty()) ++empty;
    }
    if (empty > 0) log().warn("EmptySelection: {} cells keep no basis function at delta={}", empty, delta);
    return r;
}

Eigen::VectorXd InterfaceFrame::project(const Eigen::VectorXd& l) const {
    return E.leftCols(n_selected) * coords(l).head(n_selected);
}

Eigen::VectorXd restricted_xi(const Discretization& disc, int f, int cell, int k) {
    const auto& rows = disc.rows(f);
    const auto xi = disc.bases[cell].xi(k);
    Eigen::VectorXd out(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) out(r) = xi(rows[r]);
    return out;
}

namespace {

void check_rank(const Eigen::MatrixXd& g, const char* family) {
    if (g.cols() == 0) return;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g);
    qr.setThreshold(1e-10);
    if (qr.rank() < g.cols()) {
        throw RankDeficient(fmt::format("{} generating vectors have rank {} < {}", family, qr.rank(), g.cols()));
    }
}

Eigen::MatrixXd orthonormal_columns(const Eigen::MatrixXd& g) {
    if (g.cols() == 0) return Eigen::MatrixXd(g.rows(), 0);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    return qr.householderQ() * Eigen::MatrixXd::Identity(g.rows(), g.cols());
}

double inverse_inf_norm(const Eigen::MatrixXd& a) {
    const Eigen::MatrixXd inv = a.partialPivLu().inverse();
    return inv.cwiseAbs().rowwise().sum().maxCoeff();
}

// Generating vectors of interface f: centered basis of C- then C+.
std::pair<std::vector<ModeRef>, std::vector<ModeRef>> generator_refs(const Discretization& disc,
                                                                      const SelectionResult& sel, int f) {
    const auto& face = disc.mesh.interfaces[f];
    std::pair<std::vector<ModeRef>, std::vector<ModeRef>> out;
    std::vector<int> cells{face.minus};
    if (face.interior()) cells.push_back(face.plus);
    for (int c : cells) {
        for (int k : partition_basis(face.side_in(c), disc.M()).centered) {
            (sel.cells[c].contains(k) ? out.first : out.second).push_back({c, k});
        }
    }
    return out;
}

Eigen::MatrixXd stack(const Discretization& disc, int f, const std::vector<ModeRef>& refs) {
    Eigen::MatrixXd g(disc.rows(f).size(), refs.size());
    for (std::size_t n = 0; n < refs.size(); ++n) g.col(n) = restricted_xi(disc, f, refs[n].cell, refs[n].k);
    return g;
}

}  // namespace

InterfaceFrame build_frame(const Eigen::MatrixXd& selected_generators, const Eigen::MatrixXd& unselected_generators) {
    const Eigen::Index d = selected_generators.rows();
    if (unselected_generators.rows() != d || selected_generators.cols() + unselected_generators.cols() != d) {
        throw CountMismatch(fmt::format("interface frame needs {} generators, got {} + {}", d,
                                        selected_generators.cols(), unselected_generators.cols()));
    }
    check_rank(selected_generators, "selected");
    check_rank(unselected_generators, "unselected");

    InterfaceFrame s;
    s.dim = static_cast<int>(d);
    const Eigen::Index ns = selected_generators.cols();
    s.n_selected = static_cast<int>(ns);
    s.E.resize(d, d);
    s.E.leftCols(ns) = orthonormal_columns(selected_generators);
    s.E.rightCols(d - ns) = orthonormal_columns(unselected_generators);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(s.E);
    const auto& sv = svd.singularValues();
    if (!(sv(d - 1) > 1e-14 * sv(0))) {
        throw SingularE(fmt::format("interface matrix E is singular (sigma_min = {:.3g})", sv(d - 1)));
    }
    s.inv_norm_2 = 1.0 / sv(d - 1);
    s.condition = sv(0) / sv(d - 1);
    s.lu.compute(s.E);
    s.inv_norm_inf = inverse_inf_norm(s.E);

    Eigen::MatrixXd mixed(d, d);
    mixed.leftCols(ns) = s.E.leftCols(ns);
    mixed.rightCols(d - ns) = unselected_generators;
    s.generator_inv_norm_inf = inverse_inf_norm(mixed);
    return s;
}

InterfaceSpace build_interface_space(const Discretization& disc, const SelectionResult& sel, int f) {
    InterfaceSpace s;
    s.interface = f;
    std::tie(s.selected, s.unselected) = generator_refs(disc, sel, f);
    s.frame = std::make_shared<const InterfaceFrame>(build_frame(stack(disc, f, s.selected), stack(disc, f, s.unselected)));
    if (s.frame->condition > 1e6) log().warn("interface {}: cond(E) = {:.3g}", f, s.frame->condition);
    return s;
}

InterfaceSpaces build_interface_spaces(const Discretization& disc, const SelectionResult& sel) {
    const auto& faces = disc.mesh.interfaces;
    InterfaceSpaces out(faces.size());

    // Frames depend only on the adjacent spectra, selections, orientation
    // and wall.
    using Key = std::tuple<const void*, const void*, int, int, std::vector<char>, std::vector<char>>;
    std::map<Key, std::shared_ptr<const InterfaceFrame>> shared;
    std::mutex guard;

    parallel_for(faces.size(), [&](std::size_t n) {
        const int f = static_cast<int>(n);
        const auto& face = faces[f];
        InterfaceSpace& s = out[f];
        s.interface = f;
        std::tie(s.selected, s.unselected) = generator_refs(disc, sel, f);

        const void* sm = &disc.bases[face.minus].spectrum();
        const void* sp = face.interior() ? &disc.bases[face.plus].spectrum() : nullptr;
        Key key{sm, sp, static_cast<int>(face.orientation), face.interior() ? -1 : static_cast<int>(face.wall),
                sel.cells[face.minus].mask, face.interior() ? sel.cells[face.plus].mask : std::vector<char>{}};
        {
            std::lock_guard lock(guard);
            if (auto it = shared.find(key); it != shared.end()) {
                s.frame = it->second;
                return;
            }
        }
        auto built = std::make_shared<const InterfaceFrame>(build_frame(stack(disc, f, s.selected), stack(disc, f, s.unselected)));
        if (built->condition > 1e6) log().warn("interface {}: cond(E) = {:.3g}", f, built->condition);
        std::lock_guard lock(guard);
        s.frame = shared.try_emplace(key, std::move(built)).first->second;
    });
    return out;
}

void write_selection_csv(std::ostream& out, const Discretization& disc, const SelectionResult& sel) {
    out << "i,j,n_selected\n";
    for (int c = 0; c < disc.cell_count(); ++c) {
        out << fmt::format("{},{},{}\n", disc.mesh.cell_i(c), disc.mesh.cell_j(c), sel.cells[c].selected.size());
    }
}

}  // namespace arte
