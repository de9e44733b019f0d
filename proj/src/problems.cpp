#include "arte/problems.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "arte/errors.hpp"
#include "arte/gauss_legendre.hpp"
#include "arte/mesh.hpp"

namespace arte {

using nlohmann::json;

InflowFn ProblemSpec::inflow_fn() const {
    const double v = inflow;
    return [v](double, double, const Direction&, int) { return v; };
}

namespace {

const CellMedium kDiffusive{1000.0, 999.9995, 0.0, 0.0};
const CellMedium kTransport{1.0, 0.5, 0.0, 0.0};

void check_order(int N) {
    if (N < 2 || N > 24 || N % 2 != 0) throw ConfigError(fmt::format("N must be even in [2, 24], got {}", N), "SchemaError");
}

}  // namespace

bool lattice_diffusive(int i, int j, int I) {
    const int block = I / 4;
    const int a = (i - 1) / block;
    const int b = (j - 1) / block;
    return (a + b) % 2 == 1;
}

ProblemSpec lattice_problem(int I, int N) {
    if (I < 4 || I % 4 != 0) throw ConfigError(fmt::format("lattice needs I divisible by 4, got {}", I), "SchemaError");
    check_order(N);
    ProblemSpec spec;
    spec.name = "lattice";
    spec.I = I;
    spec.N = N;
    spec.inflow = 1.0;
    const Mesh mesh = build_mesh(I);
    spec.media.resize(mesh.cell_count());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        spec.media[c] = lattice_diffusive(mesh.cell_i(c), mesh.cell_j(c), I) ? kDiffusive : kTransport;
    }
    return spec;
}

BufferZoneFields buffer_zone_at(double x, double y) {
    const double ramp = 0.02 * x + 0.001;
    const double r2 = x * x + y * y;
    return {(1.0 + r2) / ramp, ramp * (0.5 + r2), ramp * std::sin(x * y)};
}

ProblemSpec buffer_zone_problem(int I, int N) {
    if (I < 2) throw ConfigError(fmt::format("buffer zone needs I >= 2, got {}", I), "SchemaError");
    check_order(N);
    ProblemSpec spec;
    spec.name = "buffer_zone";
    spec.I = I;
    spec.N = N;
    spec.inflow = 0.0;
    const Mesh mesh = build_mesh(I);
    const GaussRule rule = gauss_legendre(3);
    spec.media.resize(mesh.cell_count());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto g = mesh.geometry(c);
        double st = 0, sa = 0, q = 0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double x = g.x_center() + 0.5 * g.width() * rule.nodes[a];
                const double y = g.y_center() + 0.5 * g.width() * rule.nodes[b];
                const double w = 0.25 * rule.weights[a] * rule.weights[b];
                const auto f = buffer_zone_at(x, y);
                st += w * f.sigma_t;
                sa += w * f.sigma_a;
                q += w * f.q;
            }
        }
        spec.media[c] = {st, st - sa, 0.2, q};
    }
    return spec;
}

ProblemSpec constant_problem(int I, int N, const CellMedium& medium, double inflow) {
    check_order(N);
    if (I < 1) throw ConfigError(fmt::format("I must be >= 1, got {}", I), "SchemaError");
    validate(medium);
    ProblemSpec spec;
    spec.name = "constant";
    spec.I = I;
    spec.N = N;
    spec.inflow = inflow;
    spec.constant_medium = medium;
    spec.media.assign(static_cast<std::size_t>(I) * I, medium);
    return spec;
}

std::vector<CellMedium> read_coefficients_csv(std::istream& in, int I) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("coefficient table is empty", "SchemaError");
    if (line.rfind("i,j,sigma_t,sigma_s,g,q", 0) != 0) {
        throw ConfigError(fmt::format("coefficient table header must be `i,j,sigma_t,sigma_s,g,q`, got `{}`", line),
                          "SchemaError");
    }
    const Mesh mesh = build_mesh(I);
    std::vector<CellMedium> media(mesh.cell_count());
    std::vector<char> filled(mesh.cell_count(), 0);
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::array<std::string, 6> f;
        for (auto& s : f) {
            if (!std::getline(row, s, ',')) {
                throw ConfigError(fmt::format("coefficient table line {}: expected 6 fields", lineno), "SchemaError");
            }
        }
        int i = 0, j = 0;
        CellMedium m;
        try {
            i = std::stoi(f[0]);
            j = std::stoi(f[1]);
            m = {std::stod(f[2]), std::stod(f[3]), std::stod(f[4]), std::stod(f[5])};
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("coefficient table line {}: malformed number", lineno), "SchemaError");
        }
        if (i < 1 || i > I || j < 1 || j > I) {
            throw ConfigError(fmt::format("coefficient table line {}: cell ({}, {}) outside the {}x{} mesh", lineno, i, j, I, I),
                              "SchemaError");
        }
        const int c = mesh.cell_id(i, j);
        try {
            validate(m);
        } catch (const DegenerateMedium& e) {
            throw DegenerateMedium(fmt::format("coefficient table line {}, cell ({}, {}): {}", lineno, i, j, e.what()));
        }
        media[c] = m;
        filled[c] = 1;
    }
    for (int c = 0; c < mesh.cell_count(); ++c) {
        if (!filled[c]) {
            throw ConfigError(fmt::format("coefficient table misses cell ({}, {})", mesh.cell_i(c), mesh.cell_j(c)),
                              "SchemaError");
        }
    }
    return media;
}

void write_coefficients_csv(std::ostream& out, const ProblemSpec& spec) {
    const Mesh mesh = build_mesh(spec.I);
    out << "i,j,sigma_t,sigma_s,g,q\n";
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const auto& m = spec.media[c];
        out << fmt::format("{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n", mesh.cell_i(c), mesh.cell_j(c), m.sigma_t, m.sigma_s,
                           m.g, m.q);
    }
}

namespace {

template <class T>
T field(const json& config, const char* key) {
    try {
        return config.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(fmt::format("config field `{}`: {}", key, e.what()), "SchemaError");
    }
}

}  // namespace

ProblemSpec problem_from_json(const json& config, const std::filesystem::path& base_dir) {
    if (!config.is_object()) throw ConfigError("config must be a JSON object", "SchemaError");
    static const std::set<std::string> known{"problem", "I", "N", "deltas", "outputs", "coefficients_csv", "inflow", "medium"};
    for (const auto& [key, _] : config.items()) {
        if (!known.contains(key)) throw ConfigError(fmt::format("config field `{}` is not recognized", key), "SchemaError");
    }
    const auto name = field<std::string>(config, "problem");
    const int I = field<int>(config, "I");
    const int N = field<int>(config, "N");

    ProblemSpec spec;
    if (name == "lattice") {
        spec = lattice_problem(I, N);
    } else if (name == "buffer_zone") {
        spec = buffer_zone_problem(I, N);
    } else if (name == "constant") {
        const json& m = config.contains("medium") ? config.at("medium") : json::object();
        CellMedium med{m.value("sigma_t", 1.0), m.value("sigma_s", 0.5), m.value("g", 0.0), m.value("q", 1.0)};
        spec = constant_problem(I, N, med, config.value("inflow", med.q / med.sigma_a()));
    } else if (name == "table") {
        check_order(N);
        const auto rel = field<std::string>(config, "coefficients_csv");
        const auto path = base_dir / rel;
        std::ifstream in(path);
        if (!in) throw IoError(fmt::format("cannot open coefficient table {}", path.string()));
        spec.name = "table";
        spec.I = I;
        spec.N = N;
        spec.media = read_coefficients_csv(in, I);
        spec.coefficients_csv = rel;
    } else {
        throw ConfigError(fmt::format("config field `problem`: unknown problem `{}`", name), "SchemaError");
    }
    if (config.contains("inflow")) spec.inflow = field<double>(config, "inflow");
    if (config.contains("deltas")) spec.deltas = field<std::vector<double>>(config, "deltas");
    for (double d : spec.deltas) {
        if (!(d >= 0.0 && d < 1.0)) throw ConfigError(fmt::format("config field `deltas`: {} not in [0, 1)", d), "SchemaError");
    }
    if (config.contains("outputs")) spec.outputs = field<std::vector<std::string>>(config, "outputs");
    return spec;
}

ProblemSpec load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(fmt::format("cannot open config {}", path.string()));
    json config;
    try {
        config = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("{}: {}", path.string(), e.what()), "SchemaError");
    }
    return problem_from_json(config, path.parent_path());
}

json problem_to_json(const ProblemSpec& spec) {
    json out{{"problem", spec.name}, {"I", spec.I}, {"N", spec.N}, {"deltas", spec.deltas}, {"inflow", spec.inflow}};
    if (!spec.outputs.empty()) out["outputs"] = spec.outputs;
    if (spec.name == "constant" && spec.constant_medium) {
        const auto& m = *spec.constant_medium;
        out["medium"] = {{"sigma_t", m.sigma_t}, {"sigma_s", m.sigma_s}, {"g", m.g}, {"q", m.q}};
    }
    if (spec.name == "table") out["coefficients_csv"] = spec.coefficients_csv;
    return out;
}

void save_problem(const std::filesystem::path& path, ProblemSpec spec) {
    if (spec.name == "table") {
        if (spec.coefficients_csv.empty()) spec.coefficients_csv = path.stem().string() + "_coefficients.csv";
        std::ofstream table(path.parent_path() / spec.coefficients_csv);
        if (!table) throw IoError(fmt::format("cannot write coefficient table next to {}", path.string()));
        write_coefficients_csv(table, spec);
    }
    std::ofstream out(path);
    if (!out) throw IoError(fmt::format("cannot write config {}", path.string()));
    out << problem_to_json(spec).dump(2) << '\n';
}

Discretization discretize(const ProblemSpec& spec) { return discretize(spec.I, spec.N, spec.media, spec.inflow_fn()); }

}  // namespace arte
