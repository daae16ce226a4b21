#include "gpm/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "gpm/error.hpp"
#include "gpm/verify.hpp"

namespace gpm {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InvalidArgument("config field '" + key + "' is missing or has the wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const json& j, const std::string& key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<T>(j, key);
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw InvalidArgument("unknown key '" + key + "' in " + where);
}

}  // namespace

WeightFunction KernelSpec::build(int dim) const {
  if (family == "poly") return WeightFunction::polynomial(p, dim);
  if (family == "table") return load_weight_table(table_path, dim);
  throw InvalidArgument("kernel family must be 'poly' or 'table', got '" + family + "'");
}

KernelSpec KernelSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  KernelSpec k;
  k.family = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (k.family == "poly") {
    if (!arg.empty()) {
      try {
        k.p = std::stoi(arg);
      } catch (const std::exception&) {
        throw InvalidArgument("kernel exponent must be an integer: " + text);
      }
    }
  } else if (k.family == "table") {
    if (arg.empty()) throw InvalidArgument("table kernel needs a CSV path (table:PATH)");
    k.table_path = arg;
  } else {
    throw InvalidArgument("kernel must be poly[:p] or table:PATH, got '" + text + "'");
  }
  return k;
}

KernelSpec KernelSpec::from_json(const json& j) {
  reject_unknown(j, {"family", "p", "path"}, "kernel");
  KernelSpec k;
  k.family = j.value("family", std::string("poly"));
  if (k.family == "poly") {
    k.p = optional_field<int>(j, "p").value_or(2);
  } else if (k.family == "table") {
    k.table_path = field<std::string>(j, "path");
  } else {
    throw InvalidArgument("kernel.family must be 'poly' or 'table'");
  }
  return k;
}

double RunConfig::resolved_dilation() const {
  if (dilation) return *dilation;
  if (dilation_ratio) return *dilation_ratio * spacing;
  throw InvalidArgument("config needs H or H_ratio");
}

double RunConfig::resolved_h() const {
  if (h) return *h;
  if (h_ratio) return *h_ratio * spacing;
  throw InvalidArgument("config needs h or h_ratio");
}

RunConfig parse_config(const json& j) {
  reject_unknown(j,
                 {"d", "lower", "upper", "H", "H_ratio", "spacing", "perturbation", "seed", "kernel", "h",
                  "h_ratio", "method", "cg_rel_tol", "cg_max_iter", "require_connectivity", "jacobi",
                  "laplacian_volume", "source", "out", "deterministic", "sweep"},
                 "config");
  RunConfig c;
  c.d = field<int>(j, "d");
  if (c.d < 1 || c.d > 3) throw InvalidArgument("config field 'd' must be 1, 2 or 3");
  c.lower = field<std::vector<double>>(j, "lower");
  c.upper = field<std::vector<double>>(j, "upper");
  if (c.lower.size() != static_cast<std::size_t>(c.d) || c.upper.size() != static_cast<std::size_t>(c.d))
    throw InvalidArgument("config fields 'lower' and 'upper' must have d entries");
  c.dilation = optional_field<double>(j, "H");
  c.dilation_ratio = optional_field<double>(j, "H_ratio");
  if (c.dilation.has_value() == c.dilation_ratio.has_value())
    throw InvalidArgument("config needs exactly one of 'H' and 'H_ratio'");
  c.spacing = field<double>(j, "spacing");
  if (!(c.spacing > 0.0)) throw InvalidArgument("config field 'spacing' must be positive");
  c.perturbation = optional_field<double>(j, "perturbation").value_or(0.0);
  if (c.perturbation < 0.0) throw InvalidArgument("config field 'perturbation' must be non-negative");
  c.seed = optional_field<std::uint64_t>(j, "seed").value_or(0);
  if (j.contains("kernel")) c.kernel = KernelSpec::from_json(j.at("kernel"));
  c.h = optional_field<double>(j, "h");
  c.h_ratio = optional_field<double>(j, "h_ratio");
  if (c.h.has_value() == c.h_ratio.has_value())
    throw InvalidArgument("config needs exactly one of 'h' and 'h_ratio'");

  const auto method = optional_field<std::string>(j, "method").value_or("cg");
  if (method == "cg") c.solver.method = SolveMethod::cg;
  else if (method == "dense") c.solver.method = SolveMethod::dense_direct;
  else throw InvalidArgument("config field 'method' must be 'cg' or 'dense'");
  c.solver.cg_rel_tol = optional_field<double>(j, "cg_rel_tol").value_or(1e-12);
  if (!(c.solver.cg_rel_tol > 0.0)) throw InvalidArgument("config field 'cg_rel_tol' must be positive");
  c.solver.cg_max_iter = optional_field<int>(j, "cg_max_iter");
  if (c.solver.cg_max_iter && *c.solver.cg_max_iter < 1)
    throw InvalidArgument("config field 'cg_max_iter' must be >= 1");
  c.solver.require_connectivity = optional_field<bool>(j, "require_connectivity").value_or(true);
  c.solver.jacobi = optional_field<bool>(j, "jacobi").value_or(false);

  const auto lv = optional_field<std::string>(j, "laplacian_volume").value_or("neighbor");
  if (lv == "neighbor") c.laplacian_volume = LaplacianVolume::neighbor;
  else if (lv == "self") c.laplacian_volume = LaplacianVolume::self;
  else throw InvalidArgument("config field 'laplacian_volume' must be 'neighbor' or 'self'");

  c.source = optional_field<std::string>(j, "source").value_or("sin2-v1");
  c.out = optional_field<std::string>(j, "out").value_or("out");
  c.deterministic = optional_field<bool>(j, "deterministic").value_or(true);

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown(s, {"spacing", "h_ratio", "perturbation", "p"}, "sweep");
    SweepSpec sw;
    sw.spacing = optional_field<std::vector<double>>(s, "spacing").value_or(std::vector<double>{c.spacing});
    sw.h_ratio = optional_field<std::vector<double>>(s, "h_ratio")
                     .value_or(std::vector<double>{c.h_ratio.value_or(c.h.value_or(0.0) / c.spacing)});
    sw.perturbation =
        optional_field<std::vector<double>>(s, "perturbation").value_or(std::vector<double>{c.perturbation});
    sw.p = optional_field<std::vector<int>>(s, "p").value_or(std::vector<int>{c.kernel.p});
    if (sw.spacing.empty() || sw.h_ratio.empty() || sw.perturbation.empty() || sw.p.empty())
      throw InvalidArgument("sweep ranges must be non-empty");
    c.sweep = sw;
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("cannot parse config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

ParticleSystem build_system(const RunConfig& cfg) {
  const Domain domain = make_box_domain(cfg.d, cfg.lower, cfg.upper, cfg.resolved_dilation());
  ParticleSystem s = generate_lattice(domain, cfg.spacing);
  if (cfg.perturbation > 0.0) s = perturb_positions(s, cfg.perturbation, cfg.seed);
  return set_influence_radius(s, cfg.resolved_h());
}

std::vector<std::string> builtin_source_names() { return {"zero-v1", "sin2-v1", "sin2-curl-v1", "unit-x-v1"}; }

std::optional<VectorField> builtin_source(const std::string& name, const ParticleSystem& s) {
  const auto& dom = s.domain();
  if (name == "zero-v1" || name == "zero") return VectorField::zeros(s.size());
  if (name == "unit-x-v1") {
    VectorField f = VectorField::zeros(s.size());
    for (auto& v : f.values) v[0] = 1.0;
    return f;
  }
  if (name == "sin2-v1" || name == "sin2-curl-v1") {
    const auto mc = ManufacturedCase::sin2(s.dim(), {}, name == "sin2-curl-v1", dom.lower(), dom.upper());
    return sample_vector(s, mc.f);
  }
  return std::nullopt;
}

}  // namespace gpm
