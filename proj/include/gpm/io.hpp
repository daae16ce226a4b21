#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpm/analysis.hpp"
#include "gpm/geometry.hpp"
#include "gpm/operators.hpp"
#include "gpm/solver.hpp"
#include "gpm/verify.hpp"

namespace gpm::io {

using nlohmann::json;

// {d, lower, upper, H, h, spacing, positions, volumes}; h is null when unset.
json system_to_json(const ParticleSystem& s);
ParticleSystem system_from_json(const json& j);
std::string dump_system(const ParticleSystem& s);
void save_system(const std::filesystem::path& path, const ParticleSystem& s);
ParticleSystem load_system(const std::filesystem::path& path);

// index, x_1..x_d, value(s)
void write_field_csv(std::ostream& out, const ParticleSystem& s, const ScalarField& f,
                     const std::string& name = "value");
void write_field_csv(std::ostream& out, const ParticleSystem& s, const VectorField& f,
                     const std::string& name = "f");
// index, x_1..x_d, u, region (Omega | Gamma_H)
void write_solution_csv(std::ostream& out, const ParticleSystem& s, const ScalarField& u);
// Per-particle vectors: index followed by d components; header optional.
VectorField read_vector_csv(const std::filesystem::path& path, const ParticleSystem& s);
// Values of the named column (by header) from a field or solution CSV.
std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& column);

json to_json(const ConnectivityReport& r, std::size_t max_listed = 1000);
json to_json(const SemiRegularReport& r);
json to_json(const IdentityReport& r);
json telemetry_json(const SolveResult& r);

// check,system_id,seed,lhs,rhs,gap,pass
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const IdentityReport& r);

// Write via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gpm::io
