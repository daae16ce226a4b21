#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gpm/analysis.hpp"
#include "gpm/config.hpp"
#include "gpm/error.hpp"
#include "gpm/io.hpp"
#include "gpm/parallel.hpp"
#include "gpm/solver.hpp"
#include "gpm/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gpm;

namespace {

struct Flags {
  std::string config;
  std::string system;
  std::string out;
  std::string method;
  std::optional<std::uint64_t> seed;
  std::string deterministic;
  bool allow_singular = false;
  std::string kernel;
  std::string source;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "run configuration JSON")->check(CLI::ExistingFile);
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--method", f.method, "linear solver")->check(CLI::IsMember({"cg", "dense"}));
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--deterministic", f.deterministic, "index-ordered reductions")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_flag("--allow-singular", f.allow_singular, "solve even when not h-connected");
  cmd->add_option("--kernel", f.kernel, "poly[:p] or table:PATH");
}

std::optional<RunConfig> config_of(const Flags& f) {
  if (f.config.empty()) return std::nullopt;
  RunConfig c = load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (!f.kernel.empty()) c.kernel = KernelSpec::parse(f.kernel);
  if (!f.source.empty()) c.source = f.source;
  if (!f.out.empty()) c.out = f.out;
  if (f.method == "cg") c.solver.method = SolveMethod::cg;
  if (f.method == "dense") c.solver.method = SolveMethod::dense_direct;
  if (f.allow_singular) c.solver.require_connectivity = false;
  if (!f.deterministic.empty()) c.deterministic = f.deterministic == "on";
  return c;
}

// Settings for verbs that can run from a system file alone.
struct Context {
  RunConfig cfg;
  std::optional<ParticleSystem> system;
};

Context context_of(const Flags& f, bool need_system) {
  Context ctx;
  if (auto c = config_of(f)) {
    ctx.cfg = *c;
  } else {
    if (f.seed) ctx.cfg.seed = *f.seed;
    if (!f.kernel.empty()) ctx.cfg.kernel = KernelSpec::parse(f.kernel);
    if (!f.source.empty()) ctx.cfg.source = f.source;
    if (!f.out.empty()) ctx.cfg.out = f.out;
    if (f.method == "dense") ctx.cfg.solver.method = SolveMethod::dense_direct;
    if (f.allow_singular) ctx.cfg.solver.require_connectivity = false;
    if (!f.deterministic.empty()) ctx.cfg.deterministic = f.deterministic == "on";
  }
  set_deterministic(ctx.cfg.deterministic);
  if (!f.system.empty()) {
    ctx.system = io::load_system(f.system);
  } else if (!f.config.empty()) {
    ctx.system = build_system(ctx.cfg);
  } else if (need_system) {
    throw InvalidArgument("need --system FILE or --config FILE");
  }
  return ctx;
}

std::string text_of(const json& j) { return j.dump(2) + "\n"; }

VectorField load_source(const std::string& name, const ParticleSystem& s) {
  if (auto f = builtin_source(name, s)) return *f;
  if (fs::exists(name)) return io::read_vector_csv(name, s);
  std::string names;
  for (const auto& n : builtin_source_names()) names += " " + n;
  throw InvalidArgument("source '" + name + "' is neither a built-in field (" + names.substr(1) + ") nor a CSV file");
}

double operator_residual(const Discretization& disc, const ScalarField& u, const VectorField& f,
                         LaplacianVolume volume) {
  const auto& s = disc.system();
  const ScalarField lap = apply_lap(disc, u, volume);
  const ScalarField div = apply_div_plus(disc, extend_by_zero(s, f));
  ScalarField r = ScalarField::zeros(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r[i] = -lap[i] - div[i];
  return norm_l2(s, r, Region::omega);
}

struct ManufacturedErrors {
  double l2 = 0.0;
  double h1 = 0.0;
};

std::optional<ManufacturedErrors> manufactured_errors(const Discretization& disc, const std::string& source,
                                                      const ScalarField& u) {
  if (source != "sin2-v1" && source != "sin2-curl-v1") return std::nullopt;
  const auto& s = disc.system();
  const auto mc = ManufacturedCase::sin2(s.dim(), {}, false, s.domain().lower(), s.domain().upper());
  const ScalarField exact = project_to_vh(s, sample_scalar(s, mc.u));
  ScalarField err = u;
  for (std::size_t i = 0; i < s.size(); ++i) err[i] -= exact[i];
  return ManufacturedErrors{norm_l2(s, err, Region::omega), seminorm_h10(disc, err, Region::omega)};
}

// ---- gen

int cmd_gen(const Flags& f) {
  if (f.config.empty()) throw InvalidArgument("gen needs --config FILE");
  const Context ctx = context_of(f, true);
  const ParticleSystem& s = *ctx.system;
  const fs::path dir = ctx.cfg.out;
  io::write_file_atomic(dir / "system.json", io::dump_system(s));
  std::cout << "N=" << s.size() << " |Lambda(Omega)|=" << s.interior().size()
            << " |Lambda(Gamma_H)|=" << s.boundary().size() << " min_pair_distance=" << s.min_pair_distance()
            << "\nwrote " << (dir / "system.json").string() << "\n";
  return 0;
}

// ---- check

int cmd_check(const Flags& f) {
  const Context ctx = context_of(f, true);
  const Discretization disc(*ctx.system, ctx.cfg.kernel.build(ctx.system->dim()));
  const auto conn = check_h_connectivity(disc.system(), disc.neighbors());
  const auto semi = semi_regular_constant(disc);
  const fs::path dir = ctx.cfg.out;
  io::write_file_atomic(dir / "connectivity.json", text_of(io::to_json(conn)));
  io::write_file_atomic(dir / "semi_regular.json", text_of(io::to_json(semi)));
  if (conn.connected) {
    std::cout << "h-connected: all " << disc.system().interior().size()
              << " interior particles reach Gamma_H; c0=" << semi.c0 << " (argmax " << semi.argmax_index << ")\n";
    return 0;
  }
  std::cout << "NOT h-connected: " << conn.unreachable_interior.size() << " unreachable interior particles:";
  const std::size_t shown = std::min<std::size_t>(conn.unreachable_interior.size(), 50);
  for (std::size_t k = 0; k < shown; ++k) std::cout << ' ' << conn.unreachable_interior[k];
  if (shown < conn.unreachable_interior.size()) std::cout << " ...";
  std::cout << "; c0=" << semi.c0 << "\n";
  return static_cast<int>(ExitCode::check_negative);
}

// ---- solve

int cmd_solve(const Flags& f) {
  const Context ctx = context_of(f, true);
  const RunConfig& cfg = ctx.cfg;
  const Discretization disc(*ctx.system, cfg.kernel.build(ctx.system->dim()));
  const auto& s = disc.system();
  const VectorField src = load_source(cfg.source, s);

  json tele;
  tele["source"] = cfg.source;
  tele["n"] = s.size();
  tele["n_omega"] = s.interior().size();
  const auto conn = check_h_connectivity(s, disc.neighbors(), 0);
  tele["connected"] = conn.connected;

  const SolveResult sol = solve_poisson(disc, src, cfg.solver);
  const fs::path dir = cfg.out;
  std::ostringstream csv;
  io::write_solution_csv(csv, s, sol.u);
  io::write_file_atomic(dir / "solution.csv", csv.str());

  tele.update(io::telemetry_json(sol));
  tele["cg_rel_tol"] = cfg.solver.cg_rel_tol;
  tele["laplacian_volume"] = cfg.laplacian_volume == LaplacianVolume::neighbor ? "neighbor" : "self";
  const double res = operator_residual(disc, sol.u, src, cfg.laplacian_volume);
  const double scale = norm_l2(s, apply_div_plus(disc, extend_by_zero(s, src)), Region::omega);
  tele["operator_residual"] = res;
  tele["operator_relative_residual"] = scale > 0.0 ? res / scale : res;
  if (!conn.connected) tele["least_squares_residual"] = res;
  const double c0 = semi_regular_constant(disc).c0;
  const double bound = std::sqrt(s.dim() * c0) * norm_l2(s, extend_by_zero(s, src), Region::omega);
  tele["c0"] = c0;
  tele["u_h1_omega"] = seminorm_h10(disc, sol.u, Region::omega);
  tele["stability_ratio"] = bound > 0.0 ? tele["u_h1_omega"].get<double>() / bound : 0.0;
  if (auto e = manufactured_errors(disc, cfg.source, sol.u)) {
    tele["error_l2"] = e->l2;
    tele["error_h1"] = e->h1;
  }
  io::write_file_atomic(dir / "telemetry.json", text_of(tele));
  std::cout << "solved N_Omega=" << s.interior().size() << " iterations=" << sol.iterations
            << " residual=" << sol.residual_norm << "\nwrote " << (dir / "solution.csv").string() << "\n";
  return 0;
}

// ---- verify

struct Suite {
  std::vector<IdentityReport> reports;
  void add(IdentityReport r, const std::string& id, std::uint64_t seed) {
    r.system_id = id;
    r.seed = seed;
    reports.push_back(std::move(r));
  }
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int draws = 100;
  int systems = 20;
  std::optional<Discretization> fixed;
  std::string fixed_id;
};

IdentityReport outcome_report(std::string name, bool pass) {
  IdentityReport r;
  r.name = std::move(name);
  r.relation = Relation::equal;
  r.lhs = pass ? 1.0 : 0.0;
  r.rhs = 1.0;
  r.abs_gap = pass ? 0.0 : 1.0;
  r.pass = pass;
  return r;
}

// Draw k of the randomized lemma checks: cycles d = 1, 2, 3 and lattice/perturbed.
struct Draw {
  Discretization disc;
  std::string id;
  std::uint64_t seed;
};

Draw draw_of(const VerifyOptions& o, int k) {
  const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(k);
  if (o.fixed) return {*o.fixed, o.fixed_id, seed};
  const int dim = 1 + k % 3;
  const bool perturbed = (k / 3) % 2 == 1;
  return {random_system(seed, dim, perturbed), draw_id(seed, dim, perturbed), seed};
}

void suite_lemma1(const VerifyOptions& o, Suite& out) {
  for (int k = 0; k < o.draws; ++k) {
    const Draw d = draw_of(o, k);
    const auto& s = d.disc.system();
    const ScalarField phi = random_scalar_vh(s, d.seed);
    const VectorField psi = random_vector_vh(s, d.seed);
    out.add(check_summation_by_parts(d.disc, phi, psi), d.id, d.seed);
    const auto e = check_energy_identity(d.disc, phi);
    out.add(e.identity, d.id, d.seed);
    out.add(e.region, d.id, d.seed);
  }
  // The identity is stated for V_h only; fields that do not vanish on Gamma_H must be refused.
  const Draw d = draw_of(o, 0);
  bool refused = false;
  try {
    check_summation_by_parts(d.disc, random_scalar(d.disc.system(), d.seed), random_vector_vh(d.disc.system(), d.seed));
  } catch (const InvalidArgument&) {
    refused = true;
  }
  out.add(outcome_report("lemma1.vh_guard", refused || d.disc.system().boundary().empty()), d.id, d.seed);
}

void suite_lemma2(const VerifyOptions& o, Suite& out) {
  for (int k = 0; k < o.draws; ++k) {
    const Draw d = draw_of(o, k);
    out.add(check_gradient_bound(d.disc, random_scalar_vh(d.disc.system(), d.seed)), d.id, d.seed);
  }
}

void thm1_on(const Discretization& disc, const std::string& id, std::uint64_t seed, Suite& out) {
  const auto& s = disc.system();
  const auto conn = check_h_connectivity(s, disc.neighbors(), 0);
  out.add(spd_witness(disc), id, seed);
  if (conn.connected) {
    out.add(check_duality(disc, random_scalar_vh(s, seed)), id, seed);
    return;
  }
  int code = 0;
  try {
    solve_poisson(disc, random_vector(s, seed));
  } catch (const ConnectivityError& e) {
    code = static_cast<int>(e.code());
  }
  auto r = outcome_report("thm1.guard", code == static_cast<int>(ExitCode::connectivity));
  r.extra["exit_code"] = code;
  out.add(r, id, seed);
}

void suite_thm1(const VerifyOptions& o, Suite& out) {
  if (o.fixed) {
    thm1_on(*o.fixed, o.fixed_id, o.seed, out);
    return;
  }
  for (int k = 0; k < o.systems; ++k) {
    const std::uint64_t seed = o.seed + 1000 + static_cast<std::uint64_t>(k);
    const int dim = 1 + k % 3;
    const bool perturbed = k % 2 == 1;
    thm1_on(random_system(seed, dim, perturbed), draw_id(seed, dim, perturbed), seed, out);
  }
  for (int k = 0; k < 5; ++k) {
    const std::uint64_t seed = o.seed + 2000 + static_cast<std::uint64_t>(k);
    const int dim = 1 + k % 3;
    thm1_on(two_cluster_system(seed, dim), "two-cluster-" + std::to_string(seed) + "-d" + std::to_string(dim), seed,
            out);
  }
}

void thm2_on(const Discretization& disc, const std::string& id, std::uint64_t seed, bool single, Suite& out) {
  const auto& s = disc.system();
  if (!check_h_connectivity(s, disc.neighbors(), 0).connected) return;
  VectorField f = random_vector(s, seed);
  if (single) f = single_particle_source(s, s.interior()[s.interior().size() / 2]);
  auto r = check_stability(disc, f);
  if (single) r.name = "thm2.stability_single_particle";
  out.add(r, id, seed);
}

void suite_thm2(const VerifyOptions& o, Suite& out) {
  if (o.fixed) {
    thm2_on(*o.fixed, o.fixed_id, o.seed, false, out);
    thm2_on(*o.fixed, o.fixed_id, o.seed, true, out);
    return;
  }
  for (int k = 0; k < o.systems; ++k) {
    const std::uint64_t seed = o.seed + 3000 + static_cast<std::uint64_t>(k);
    const int dim = 1 + k % 3;
    const bool perturbed = k % 2 == 1;
    thm2_on(random_system(seed, dim, perturbed), draw_id(seed, dim, perturbed), seed, k % 5 == 0, out);
  }
}

void suite_fvm(const VerifyOptions& o, Suite& out) {
  const std::vector<std::pair<int, double>> cases{{1, 1.0 / 16}, {1, 1.0 / 64}, {2, 1.0 / 10}, {2, 1.0 / 16}};
  for (const auto& [dim, dx] : cases) {
    const Discretization disc = calibrated_lattice(dim, dx, shell_weight(dim));
    const auto& s = disc.system();
    const auto rep = check_fvm_equivalence(disc, dx, random_scalar(s, o.seed), random_vector(s, o.seed));
    const std::string id = "calibrated-d" + std::to_string(dim) + "-n" + std::to_string(s.size());
    out.add(rep.laplacian, id, o.seed);
    out.add(rep.divergence, id, o.seed);
  }
}

void suite_manufactured(const VerifyOptions& o, const fs::path& dir, Suite& out) {
  const std::vector<ManufacturedCase> cases{ManufacturedCase::sin2(1, {1.0 / 20, 1.0 / 40, 1.0 / 80}),
                                            ManufacturedCase::sin2(2, {1.0 / 10, 1.0 / 20, 1.0 / 40})};
  for (const auto& mc : cases) {
    const auto levels = run_manufactured(mc, WeightFunction::polynomial(2, mc.dim));
    std::ostringstream csv;
    write_manufactured_csv(csv, levels);
    const std::string id = mc.name + "-d" + std::to_string(mc.dim);
    io::write_file_atomic(dir / ("manufactured-" + id + ".csv"), csv.str());
    for (std::size_t k = 1; k < levels.size(); ++k) {
      for (int norm = 0; norm < 2; ++norm) {
        const double prev = norm == 0 ? levels[k - 1].error_l2 : levels[k - 1].error_h1;
        const double cur = norm == 0 ? levels[k].error_l2 : levels[k].error_h1;
        IdentityReport r;
        r.name = std::string("manufactured.") + (norm == 0 ? "l2" : "h1") + "_decrease_level" + std::to_string(k);
        r.relation = Relation::less_equal;
        r.lhs = cur;
        r.rhs = prev;
        r.abs_gap = prev - cur;
        r.rel_gap = prev > 0.0 ? cur / prev : 0.0;
        r.pass = cur < prev;
        r.extra["rate"] = std::log(prev / cur) / std::log(levels[k - 1].spacing / levels[k].spacing);
        out.add(r, id, o.seed);
      }
    }
  }
}

const std::vector<std::string> kSuites{"lemma1", "lemma2", "thm1", "thm2", "fvm", "manufactured", "all"};

int cmd_verify(const Flags& f, const std::string& suite, int draws, int systems) {
  Context ctx = context_of(f, false);
  VerifyOptions o;
  o.seed = ctx.cfg.seed;
  o.draws = draws;
  o.systems = systems;
  if (ctx.system) {
    if (!ctx.system->has_influence_radius()) throw InvalidArgument("verify needs a system with h set");
    o.fixed.emplace(*ctx.system, ctx.cfg.kernel.build(ctx.system->dim()));
    o.fixed_id = f.system.empty() ? "config" : fs::path(f.system).stem().string();
    if (draws == 100) o.draws = 10;
  }
  const fs::path dir = f.out.empty() ? fs::path(ctx.cfg.out) : fs::path(f.out);
  std::vector<std::string> run;
  if (suite == "all") run.assign(kSuites.begin(), kSuites.end() - 1);
  else run.push_back(suite);

  Suite all;
  int failures = 0;
  for (const auto& name : run) {
    Suite s;
    if (name == "lemma1") suite_lemma1(o, s);
    else if (name == "lemma2") suite_lemma2(o, s);
    else if (name == "thm1") suite_thm1(o, s);
    else if (name == "thm2") suite_thm2(o, s);
    else if (name == "fvm") suite_fvm(o, s);
    else if (name == "manufactured") suite_manufactured(o, dir, s);
    int failed = 0;
    for (const auto& r : s.reports) failed += r.pass ? 0 : 1;
    std::cout << name << ": " << s.reports.size() - static_cast<std::size_t>(failed) << "/" << s.reports.size()
              << " pass\n";
    failures += failed;
    for (auto& r : s.reports) all.reports.push_back(std::move(r));
  }

  std::ostringstream summary;
  io::write_summary_header(summary);
  for (std::size_t k = 0; k < all.reports.size(); ++k) {
    const auto& r = all.reports[k];
    std::ostringstream name;
    name << std::setw(4) << std::setfill('0') << k << '-' << r.name << ".json";
    io::write_file_atomic(dir / "reports" / name.str(), text_of(io::to_json(r)));
    io::write_summary_row(summary, r);
  }
  io::write_file_atomic(dir / "summary.csv", summary.str());
  std::cout << (failures == 0 ? "all checks pass" : std::to_string(failures) + " checks FAILED") << "; wrote "
            << (dir / "summary.csv").string() << "\n";
  return failures == 0 ? 0 : static_cast<int>(ExitCode::check_negative);
}

// ---- sweep

std::string csv_escape(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '"') c = ';';
  return s;
}

int cmd_sweep(const Flags& f) {
  if (f.config.empty()) throw InvalidArgument("sweep needs --config FILE");
  const RunConfig base = *config_of(f);
  set_deterministic(base.deterministic);
  if (!base.sweep) throw InvalidArgument("config has no 'sweep' section");
  const SweepSpec& sw = *base.sweep;

  std::ostringstream out;
  out << "spacing,h_ratio,perturbation,p,n,n_omega,connected,c0,iterations,residual,error_l2,error_h1,"
         "stability_ratio,status,message\n";
  out << std::setprecision(17);
  int rows = 0, failed = 0;
  for (double dx : sw.spacing)
    for (double hr : sw.h_ratio)
      for (double pert : sw.perturbation)
        for (int p : sw.p) {
          RunConfig c = base;
          c.spacing = dx;
          c.h.reset();
          c.h_ratio = hr;
          c.perturbation = pert;
          c.kernel.p = p;
          out << dx << ',' << hr << ',' << pert << ',' << p << ',';
          std::ostringstream row;
          row << std::setprecision(17);
          std::string status = "ok", message;
          std::string n, n_omega, connected, c0, iters, resid, el2, eh1, ratio;
          try {
            const Discretization disc(build_system(c), c.kernel.build(c.d));
            const auto& s = disc.system();
            n = std::to_string(s.size());
            n_omega = std::to_string(s.interior().size());
            const auto conn = check_h_connectivity(s, disc.neighbors(), 0);
            connected = conn.connected ? "true" : "false";
            const double c0v = semi_regular_constant(disc).c0;
            std::ostringstream num;
            num << std::setprecision(17) << c0v;
            c0 = num.str();
            const VectorField src = load_source(c.source, s);
            const SolveResult sol = solve_poisson(disc, src, c.solver);
            iters = std::to_string(sol.iterations);
            num.str("");
            num << sol.residual_norm;
            resid = num.str();
            if (auto e = manufactured_errors(disc, c.source, sol.u)) {
              num.str("");
              num << e->l2;
              el2 = num.str();
              num.str("");
              num << e->h1;
              eh1 = num.str();
            }
            const double bound = std::sqrt(s.dim() * c0v) * norm_l2(s, extend_by_zero(s, src), Region::omega);
            num.str("");
            num << (bound > 0.0 ? seminorm_h10(disc, sol.u, Region::omega) / bound : 0.0);
            ratio = num.str();
          } catch (const Error& e) {
            status = e.code() == ExitCode::connectivity     ? "connectivity"
                     : e.code() == ExitCode::no_convergence ? "no_convergence"
                                                            : "invalid";
            message = e.what();
            ++failed;
          }
          out << n << ',' << n_omega << ',' << connected << ',' << c0 << ',' << iters << ',' << resid << ',' << el2
              << ',' << eh1 << ',' << ratio << ',' << status << ',' << csv_escape(message) << '\n';
          ++rows;
        }
  const fs::path dir = base.out;
  io::write_file_atomic(dir / "sweep.csv", out.str());
  std::cout << rows << " runs, " << failed << " failed; wrote " << (dir / "sweep.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized particle method for the Poisson equation -lap u = div f"};
  app.require_subcommand(1);
  Flags flags;

  auto* gen = app.add_subcommand("gen", "generate a particle system from a config");
  add_common(gen, flags);

  auto* check = app.add_subcommand("check", "h-connectivity and semi-regularity reports");
  add_common(check, flags);
  check->add_option("--system", flags.system, "system JSON")->check(CLI::ExistingFile);

  auto* solve = app.add_subcommand("solve", "solve the discrete Poisson problem");
  add_common(solve, flags);
  solve->add_option("--system", flags.system, "system JSON")->check(CLI::ExistingFile);
  solve->add_option("--source", flags.source, "built-in field name or per-particle CSV");

  std::string suite;
  int draws = 100, systems = 20;
  auto* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, flags);
  verify->add_option("suite", suite, "lemma1, lemma2, thm1, thm2, fvm, manufactured or all")
      ->required()
      ->check(CLI::IsMember(kSuites));
  verify->add_option("--system", flags.system, "run the suites on this system")->check(CLI::ExistingFile);
  verify->add_option("--draws", draws, "randomized draws for lemma1/lemma2")->check(CLI::PositiveNumber);
  verify->add_option("--systems", systems, "systems for thm1/thm2")->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep");
  add_common(sweep, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::usage);
  }

  try {
    if (gen->parsed()) return cmd_gen(flags);
    if (check->parsed()) return cmd_check(flags);
    if (solve->parsed()) return cmd_solve(flags);
    if (verify->parsed()) return cmd_verify(flags, suite, draws, systems);
    if (sweep->parsed()) return cmd_sweep(flags);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::usage);
  }
  return static_cast<int>(ExitCode::usage);
}
