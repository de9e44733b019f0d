#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arte/discretization.hpp"
#include "arte/local_basis.hpp"

namespace arte {

/// A benchmark or user problem on the unit square, already cell-averaged.
struct ProblemSpec {
    std::string name;  // lattice | buffer_zone | constant | table
    int I = 0;
    int N = 0;
    std::vector<double> deltas;
    std::vector<std::string> outputs;
    std::vector<CellMedium> media;  // by cell id
    double inflow = 0.0;            // constant inflow on every incoming ordinate
    std::optional<CellMedium> constant_medium;
    std::string coefficients_csv;   // source table for `table` problems

    InflowFn inflow_fn() const;
};

/// 4x4 checkerboard of diffusive and transport blocks, unit inflow.
/// I must be divisible by 4.
ProblemSpec lattice_problem(int I, int N);
/// True where the lattice block containing cell (i, j) is diffusive.
bool lattice_diffusive(int i, int j, int I);

/// Smoothly varying coefficients, g = 0.2, zero inflow. I >= 2.
ProblemSpec buffer_zone_problem(int I, int N);

/// Pointwise buffer-zone fields.
struct BufferZoneFields {
    double sigma_t, sigma_a, q;
};
BufferZoneFields buffer_zone_at(double x, double y);

/// Homogeneous medium with constant inflow.
ProblemSpec constant_problem(int I, int N, const CellMedium& medium, double inflow);

/// JSON config -> spec. Relative CSV paths resolve against `base_dir`.
ProblemSpec problem_from_json(const nlohmann::json& config, const std::filesystem::path& base_dir = {});
ProblemSpec load_problem(const std::filesystem::path& path);

/// Spec -> JSON config. Tabulated problems reference `coefficients_csv`.
nlohmann::json problem_to_json(const ProblemSpec& spec);
/// Writes the config, and for tabulated problems the coefficient table next
/// to it.
void save_problem(const std::filesystem::path& path, ProblemSpec spec);

/// CSV `i,j,sigma_t,sigma_s,g,q`, one row per cell.
std::vector<CellMedium> read_coefficients_csv(std::istream& in, int I);
void write_coefficients_csv(std::ostream& out, const ProblemSpec& spec);

Discretization discretize(const ProblemSpec& spec);

}  // namespace arte
