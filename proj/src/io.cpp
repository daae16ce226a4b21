#include "gpm/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "gpm/error.hpp"

namespace gpm::io {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream row(line);
  while (std::getline(row, cell, ',')) {
    cell.erase(0, cell.find_first_not_of(" \t\r"));
    cell.erase(cell.find_last_not_of(" \t\r") + 1);
    cells.push_back(cell);
  }
  return cells;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (const std::exception&) {
    return false;
  }
}

void write_position(std::ostream& out, const ParticleSystem& s, std::size_t i) {
  for (int k = 0; k < s.dim(); ++k) out << ',' << s.position(i)[k];
}

void write_position_header(std::ostream& out, const ParticleSystem& s) {
  out << "index";
  for (int k = 0; k < s.dim(); ++k) out << ",x" << k + 1;
}

}  // namespace

json system_to_json(const ParticleSystem& s) {
  const int d = s.dim();
  json j;
  j["d"] = d;
  j["lower"] = std::vector<double>(s.domain().lower().begin(), s.domain().lower().begin() + d);
  j["upper"] = std::vector<double>(s.domain().upper().begin(), s.domain().upper().begin() + d);
  j["H"] = s.domain().dilation();
  j["h"] = s.has_influence_radius() ? json(s.influence_radius()) : json(nullptr);
  j["spacing"] = s.spacing();
  json pos = json::array();
  for (const auto& x : s.positions()) pos.push_back(std::vector<double>(x.begin(), x.begin() + d));
  j["positions"] = std::move(pos);
  j["volumes"] = std::vector<double>(s.volumes().begin(), s.volumes().end());
  return j;
}

ParticleSystem system_from_json(const json& j) {
  try {
    for (const auto& [key, value] : j.items()) {
      static const std::vector<std::string> known{"d", "lower", "upper", "H", "h", "spacing", "positions", "volumes"};
      if (std::find(known.begin(), known.end(), key) == known.end())
        throw InvalidArgument("unknown key in system file: " + key);
    }
    const int d = j.at("d").get<int>();
    const auto lower = j.at("lower").get<std::vector<double>>();
    const auto upper = j.at("upper").get<std::vector<double>>();
    const Domain domain = make_box_domain(d, lower, upper, j.at("H").get<double>());
    std::vector<Vec3> positions;
    for (const auto& p : j.at("positions")) {
      const auto v = p.get<std::vector<double>>();
      if (v.size() != static_cast<std::size_t>(d)) throw InvalidArgument("position with wrong dimension");
      Vec3 x{0, 0, 0};
      std::copy(v.begin(), v.end(), x.begin());
      positions.push_back(x);
    }
    auto volumes = j.at("volumes").get<std::vector<double>>();
    std::optional<double> h;
    if (j.contains("h") && !j.at("h").is_null()) h = j.at("h").get<double>();
    const double spacing = j.value("spacing", 0.0);
    return ParticleSystem::create(domain, std::move(positions), std::move(volumes), h, spacing);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("malformed system file: ") + e.what());
  }
}

std::string dump_system(const ParticleSystem& s) { return system_to_json(s).dump(1) + "\n"; }

void save_system(const std::filesystem::path& path, const ParticleSystem& s) {
  write_file_atomic(path, dump_system(s));
}

ParticleSystem load_system(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw InvalidArgument("cannot parse " + path.string() + ": " + e.what());
  }
  return system_from_json(j);
}

void write_field_csv(std::ostream& out, const ParticleSystem& s, const ScalarField& f, const std::string& name) {
  write_position_header(out, s);
  out << ',' << name << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << i;
    write_position(out, s, i);
    out << ',' << f[i] << '\n';
  }
}

void write_field_csv(std::ostream& out, const ParticleSystem& s, const VectorField& f, const std::string& name) {
  write_position_header(out, s);
  for (int k = 0; k < s.dim(); ++k) out << ',' << name << k + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << i;
    write_position(out, s, i);
    for (int k = 0; k < s.dim(); ++k) out << ',' << f[i][k];
    out << '\n';
  }
}

void write_solution_csv(std::ostream& out, const ParticleSystem& s, const ScalarField& u) {
  write_position_header(out, s);
  out << ",u,region\n" << std::setprecision(17);
  for (std::size_t i = 0; i < s.size(); ++i) {
    out << i;
    write_position(out, s, i);
    out << ',' << u[i] << ',' << (s.in_omega(i) ? "Omega" : "Gamma_H") << '\n';
  }
}

VectorField read_vector_csv(const std::filesystem::path& path, const ParticleSystem& s) {
  std::istringstream in(read_file(path));
  VectorField f = VectorField::zeros(s.size());
  std::vector<bool> seen(s.size(), false);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv(line);
    double idx = 0;
    if (cells.empty() || !parse_double(cells[0], idx)) {
      if (first) {
        first = false;
        continue;
      }
      throw InvalidArgument("malformed source CSV row: " + line);
    }
    first = false;
    if (cells.size() != static_cast<std::size_t>(1 + s.dim()))
      throw InvalidArgument("source CSV rows need index and " + std::to_string(s.dim()) + " components");
    const auto i = static_cast<std::size_t>(idx);
    if (idx < 0 || i >= s.size() || static_cast<double>(i) != idx) throw InvalidArgument("bad particle index in source CSV");
    for (int k = 0; k < s.dim(); ++k)
      if (!parse_double(cells[static_cast<std::size_t>(k) + 1], f[i][k]))
        throw InvalidArgument("non-numeric source CSV value: " + line);
    seen[i] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
    throw InvalidArgument("source CSV must list every particle");
  return f;
}

std::vector<double> read_csv_column(const std::filesystem::path& path, const std::string& column) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty CSV " + path.string());
  const auto header = split_csv(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) throw InvalidArgument("column " + column + " not in " + path.string());
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    double v = 0;
    if (col >= cells.size() || !parse_double(cells[col], v)) throw InvalidArgument("bad CSV row: " + line);
    values.push_back(v);
  }
  return values;
}

json to_json(const ConnectivityReport& r, std::size_t max_listed) {
  json j;
  j["connected"] = r.connected;
  j["unreachable_count"] = r.unreachable_interior.size();
  std::vector<std::uint32_t> listed(r.unreachable_interior.begin(),
                                    r.unreachable_interior.begin() +
                                        static_cast<std::ptrdiff_t>(std::min(max_listed, r.unreachable_interior.size())));
  j["unreachable_interior"] = listed;
  j["witness_paths"] = r.witness_paths;
  std::int64_t components = 0;
  for (auto l : r.component_labels) components = std::max(components, l + 1);
  j["component_count"] = components;
  j["diagnostic"] = r.diagnostic;
  return j;
}

json to_json(const SemiRegularReport& r) { return {{"c0", r.c0}, {"argmax_index", r.argmax_index}}; }

json to_json(const IdentityReport& r) {
  json j{{"name", r.name},          {"system_id", r.system_id}, {"seed", r.seed},
         {"relation", relation_symbol(r.relation)},
         {"lhs", r.lhs},            {"rhs", r.rhs},             {"abs_gap", r.abs_gap},
         {"rel_gap", r.rel_gap},    {"tolerance", r.tolerance}, {"tolerance_kind", r.absolute ? "absolute" : "relative"},
         {"pass", r.pass}};
  for (const auto& [k, v] : r.extra) j["extra"][k] = v;
  return j;
}

json telemetry_json(const SolveResult& r) {
  return {{"method", r.method == SolveMethod::cg ? "cg" : "dense"},
          {"iterations", r.iterations},
          {"residual_norm", r.residual_norm},
          {"residual_history", r.residual_history}};
}

void write_summary_header(std::ostream& out) { out << "check,system_id,seed,lhs,rhs,gap,pass\n"; }

void write_summary_row(std::ostream& out, const IdentityReport& r) {
  const auto old = out.precision(17);
  out << r.name << ',' << r.system_id << ',' << r.seed << ',' << r.lhs << ',' << r.rhs << ','
      << (r.relation == Relation::equal && !r.absolute ? r.rel_gap : r.abs_gap) << ',' << (r.pass ? "true" : "false") << '\n';
  out.precision(old);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    out << content;
    if (!out) throw InvalidArgument("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace gpm::io
