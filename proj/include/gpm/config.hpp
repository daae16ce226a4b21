#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpm/geometry.hpp"
#include "gpm/kernels.hpp"
#include "gpm/operators.hpp"
#include "gpm/solver.hpp"

namespace gpm {

// {"family": "poly", "p": 2} or {"family": "table", "path": "w.csv"}.
struct KernelSpec {
  std::string family = "poly";
  int p = 2;
  std::string table_path;

  WeightFunction build(int dim) const;
  // "poly:3" or "table:path.csv"
  static KernelSpec parse(const std::string& text);
  static KernelSpec from_json(const nlohmann::json& j);
};

struct SweepSpec {
  std::vector<double> spacing;
  std::vector<double> h_ratio;
  std::vector<double> perturbation;
  std::vector<int> p;
};

// Flat run configuration shared by every CLI verb. Unknown keys are rejected.
struct RunConfig {
  int d = 1;
  std::vector<double> lower;
  std::vector<double> upper;
  std::optional<double> dilation;        // "H"
  std::optional<double> dilation_ratio;  // "H_ratio": H = ratio * spacing
  double spacing = 0.0;
  double perturbation = 0.0;
  std::uint64_t seed = 0;
  KernelSpec kernel;
  std::optional<double> h;
  std::optional<double> h_ratio;
  SolveOptions solver;
  LaplacianVolume laplacian_volume = LaplacianVolume::neighbor;
  std::string source = "sin2-v1";
  std::string out = "out";
  bool deterministic = true;
  std::optional<SweepSpec> sweep;

  double resolved_dilation() const;
  double resolved_h() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

// Lattice, optional perturbation, influence radius.
ParticleSystem build_system(const RunConfig& cfg);

// Built-in source fields by versioned name: "zero-v1", "sin2-v1",
// "sin2-curl-v1" (d = 2), "unit-x-v1". Returns nullopt for unknown names.
std::optional<VectorField> builtin_source(const std::string& name, const ParticleSystem& s);
std::vector<std::string> builtin_source_names();

}  // namespace gpm
