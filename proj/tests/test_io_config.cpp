#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "gpm/config.hpp"
#include "gpm/io.hpp"
#include "gpm/verify.hpp"

using namespace gpm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config() {
  return json::parse(R"({"d": 2, "lower": [0, 0], "upper": [1, 1], "H_ratio": 3, "spacing": 0.1,
                         "h_ratio": 2.4, "kernel": {"family": "poly", "p": 2}})");
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gpm_io_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("system JSON round trip is byte-identical") {
  for (int d = 1; d <= 3; ++d) {
    const auto s = random_system(5 + d, d, true).system();
    const std::string text = io::dump_system(s);
    const auto back = io::system_from_json(json::parse(text));
    CHECK(io::dump_system(back) == text);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(back.position(i) == s.position(i));
      CHECK(back.volume(i) == s.volume(i));
    }
    CHECK(back.influence_radius() == s.influence_radius());
    const auto path = scratch("sys.json");
    io::save_system(path, s);
    CHECK(io::dump_system(io::load_system(path)) == text);
  }
  const std::vector<double> lo{0}, hi{1};
  const auto no_h = generate_lattice(Domain::box(1, lo, hi, 0.15), 0.1);
  const auto j = io::system_to_json(no_h);
  CHECK(j.at("h").is_null());
  CHECK_FALSE(io::system_from_json(j).has_influence_radius());
}

TEST_CASE("system JSON validation") {
  auto j = io::system_to_json(fx::three_particles(0.3, 0.7, 0.5));
  j["extra"] = 1;
  CHECK_THROWS_AS(io::system_from_json(j), InvalidArgument);
  j = io::system_to_json(fx::three_particles(0.3, 0.7, 0.5));
  j["h"] = 0.9;  // h >= H
  CHECK_THROWS_AS(io::system_from_json(j), InvalidArgument);
  j = io::system_to_json(fx::three_particles(0.3, 0.7, 0.5));
  j["volumes"] = {0.5, 0.5};
  CHECK_THROWS_AS(io::system_from_json(j), InvalidArgument);
  CHECK_THROWS_AS(io::load_system("/nonexistent/system.json"), InvalidArgument);
}

TEST_CASE("field CSV files") {
  const auto s = fx::three_particles(0.3, 0.7, 0.5);
  const ScalarField u{{0.0, 1.5, -2.25}, true};
  std::ostringstream out;
  io::write_solution_csv(out, s, u);
  const auto path = scratch("solution.csv");
  io::write_file_atomic(path, out.str());
  CHECK(io::read_csv_column(path, "u") == u.values);
  CHECK(out.str().find("Gamma_H") != std::string::npos);
  CHECK_THROWS_AS(io::read_csv_column(path, "nope"), InvalidArgument);

  VectorField f = VectorField::zeros(3);
  f[0][0] = 0.125;
  f[2][0] = -4;
  std::ostringstream fo;
  fo << "index,f1\n0,0.125\n1,0\n2,-4\n";
  const auto fpath = scratch("source.csv");
  io::write_file_atomic(fpath, fo.str());
  CHECK(io::read_vector_csv(fpath, s).values == f.values);
  io::write_file_atomic(fpath, "index,f1\n0,1\n1,2\n");
  CHECK_THROWS_AS(io::read_vector_csv(fpath, s), InvalidArgument);
  io::write_file_atomic(fpath, "0,1,2\n1,0,0\n2,0,0\n");
  CHECK_THROWS_AS(io::read_vector_csv(fpath, s), InvalidArgument);

  std::ostringstream vo;
  io::write_field_csv(vo, s, f);
  CHECK(vo.str().rfind("index,x1,f1", 0) == 0);
}

TEST_CASE("report serialization") {
  const Discretization disc(fx::three_particles(0.4, 0.6, 0.3), WeightFunction::polynomial(2, 1));
  const auto cj = io::to_json(check_h_connectivity(disc.system(), disc.neighbors()));
  CHECK(cj.at("connected") == false);
  CHECK(cj.at("unreachable_interior") == json::array({0}));
  const auto sj = io::to_json(semi_regular_constant(disc));
  CHECK(sj.contains("c0"));
  CHECK(sj.contains("argmax_index"));

  auto rep = equality_report("lemma1.summation_by_parts", 1.0, 1.0, 1e-12);
  rep.system_id = "sys";
  rep.seed = 3;
  const auto rj = io::to_json(rep);
  CHECK(rj.at("pass") == true);
  CHECK(rj.at("relation") == "==");
  std::ostringstream csv;
  io::write_summary_header(csv);
  io::write_summary_row(csv, rep);
  CHECK(csv.str() == "check,system_id,seed,lhs,rhs,gap,pass\nlemma1.summation_by_parts,sys,3,1,1,0,true\n");
}

TEST_CASE("config parsing") {
  const RunConfig c = parse_config(base_config());
  CHECK(c.d == 2);
  CHECK(c.resolved_dilation() == doctest::Approx(0.3));
  CHECK(c.resolved_h() == doctest::Approx(0.24));
  CHECK(c.solver.method == SolveMethod::cg);
  CHECK(c.solver.require_connectivity);
  CHECK(c.deterministic);
  const auto s = build_system(c);
  CHECK(s.influence_radius() == doctest::Approx(0.24));
  CHECK(s.interior().size() == 100);

  auto bad = base_config();
  bad["bogus"] = 1;
  try {
    parse_config(bad);
    FAIL("expected rejection");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
  bad = base_config();
  bad["kernel"]["q"] = 1;
  CHECK_THROWS_AS(parse_config(bad), InvalidArgument);
  bad = base_config();
  bad["h"] = 0.2;  // both h and h_ratio
  CHECK_THROWS_AS(parse_config(bad), InvalidArgument);
  bad = base_config();
  bad["lower"] = {0};
  CHECK_THROWS_AS(parse_config(bad), InvalidArgument);
  bad = base_config();
  bad["spacing"] = "0.1";
  CHECK_THROWS_AS(parse_config(bad), InvalidArgument);
  bad = base_config();
  bad["method"] = "gmres";
  CHECK_THROWS_AS(parse_config(bad), InvalidArgument);
  bad = base_config();
  bad["h_ratio"] = 3.5;  // h >= H
  CHECK_THROWS_AS(build_system(parse_config(bad)), InvalidArgument);
  bad = base_config();
  bad["sweep"] = {{"spacing", json::array()}};
  CHECK_THROWS_AS(parse_config(bad), InvalidArgument);
}

TEST_CASE("kernel specs") {
  CHECK(KernelSpec::parse("poly").p == 2);
  CHECK(KernelSpec::parse("poly:4").p == 4);
  CHECK(KernelSpec::parse("table:w.csv").table_path == "w.csv");
  CHECK_THROWS_AS(KernelSpec::parse("poly:x"), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::parse("table"), InvalidArgument);
  CHECK_THROWS_AS(KernelSpec::parse("gauss"), InvalidArgument);
  CHECK(KernelSpec::parse("poly:3").build(2).exponent() == 3);
}

TEST_CASE("built-in sources") {
  const auto s = build_system(parse_config(base_config()));
  for (const auto& name : builtin_source_names()) CHECK(builtin_source(name, s).has_value());
  CHECK_FALSE(builtin_source("nope", s).has_value());
  const auto z = *builtin_source("zero-v1", s);
  for (const auto& v : z.values) CHECK(v == Vec3{0, 0, 0});
  const auto x = *builtin_source("unit-x-v1", s);
  CHECK(x[0] == Vec3{1, 0, 0});
}

TEST_CASE("example config in the repository parses") {
  const auto c = load_config(fs::path(GPM_SOURCE_DIR) / "configs" / "example.json");
  CHECK(c.sweep.has_value());
  CHECK_NOTHROW(build_system(c));
}
