#include "gpm/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>

#include "gpm/parallel.hpp"

namespace gpm {

namespace {

double rel_gap_of(double lhs, double rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

// Seeds for the field generators are decorrelated from the system seed.
std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::equal: return "==";
    case Relation::less_equal: return "<=";
    case Relation::greater_equal: return ">=";
    default: return ">0";
  }
}

IdentityReport equality_report(std::string name, double lhs, double rhs, double rel_tol) {
  IdentityReport r;
  r.name = std::move(name);
  r.relation = Relation::equal;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_gap = std::abs(lhs - rhs);
  r.rel_gap = rel_gap_of(lhs, rhs);
  r.tolerance = rel_tol;
  r.pass = std::isfinite(lhs) && std::isfinite(rhs) && r.rel_gap <= rel_tol;
  return r;
}

IdentityReport inequality_report(std::string name, Relation rel, double lhs, double rhs, double slack) {
  IdentityReport r;
  r.name = std::move(name);
  r.relation = rel;
  r.lhs = lhs;
  r.rhs = rhs;
  r.tolerance = slack;
  const double excess = rel == Relation::less_equal ? lhs - rhs : rhs - lhs;
  r.abs_gap = std::max(0.0, excess);
  const double scale = std::abs(rhs);
  r.rel_gap = scale > 0.0 ? r.abs_gap / scale : (r.abs_gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  const bool finite = std::isfinite(lhs) && std::isfinite(rhs);
  r.pass = finite && (rel == Relation::less_equal ? lhs <= rhs * (1.0 + slack) : lhs >= rhs * (1.0 - slack));
  return r;
}

IdentityReport absolute_report(std::string name, double lhs, double rhs, double abs_tol) {
  IdentityReport r;
  r.name = std::move(name);
  r.relation = Relation::equal;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_gap = std::abs(lhs - rhs);
  r.rel_gap = rel_gap_of(lhs, rhs);
  r.tolerance = abs_tol;
  r.absolute = true;
  r.pass = std::isfinite(lhs) && std::isfinite(rhs) && r.abs_gap <= abs_tol;
  return r;
}

IdentityReport check_summation_by_parts(const Discretization& disc, const ScalarField& phi,
                                        const VectorField& psi) {
  const auto& s = disc.system();
  if (!vanishes_on_gamma_h(s, phi) || !vanishes_on_gamma_h(s, psi))
    throw InvalidArgument("summation by parts requires phi in V_h and psi in V_h^d");
  const double lhs = inner_product(s, apply_div_plus(disc, psi), phi, Region::omega);
  const double rhs = -inner_product(s, psi, apply_grad(disc, phi), Region::omega);
  return equality_report("lemma1.summation_by_parts", lhs, rhs, 1e-12);
}

EnergyReport check_energy_identity(const Discretization& disc, const ScalarField& phi) {
  const auto& s = disc.system();
  if (!vanishes_on_gamma_h(s, phi)) throw InvalidArgument("energy identity requires phi in V_h");
  const double lhs = -inner_product(s, apply_lap(disc, phi), phi, Region::omega);
  const double full = std::pow(seminorm_h10(disc, phi, Region::omega_h), 2);
  const double inner = std::pow(seminorm_h10(disc, phi, Region::omega), 2);
  EnergyReport rep{equality_report("lemma1.energy_identity", lhs, full, 1e-12),
                   inequality_report("lemma1.region_inequality", Relation::greater_equal, full, inner, 1e-14)};
  rep.region.extra["boundary_coupling"] = full - inner;
  return rep;
}

IdentityReport check_gradient_bound(const Discretization& disc, const ScalarField& phi) {
  const auto& s = disc.system();
  const double lhs = std::pow(norm_l2(s, apply_grad(disc, phi), Region::omega), 2);
  const double c0 = semi_regular_constant(disc).c0;
  const double rhs = disc.dim() * c0 * std::pow(seminorm_h10(disc, phi, Region::omega), 2);
  auto rep = inequality_report("lemma2.gradient_bound", Relation::less_equal, lhs, rhs, 1e-14);
  rep.extra["c0"] = c0;
  rep.extra["tightness"] = rhs > 0.0 ? lhs / rhs : 0.0;
  return rep;
}

IdentityReport check_stability(const Discretization& disc, const VectorField& f, const SolveOptions& opts) {
  const auto& s = disc.system();
  const SolveResult sol = solve_poisson(disc, f, opts);
  const double c0 = semi_regular_constant(disc).c0;
  const double lhs = seminorm_h10(disc, sol.u, Region::omega);
  const double rhs = std::sqrt(disc.dim() * c0) * norm_l2(s, extend_by_zero(s, f), Region::omega);
  auto rep = inequality_report("thm2.stability", Relation::less_equal, lhs, rhs, 1e-12);
  rep.extra["c0"] = c0;
  rep.extra["ratio"] = rhs > 0.0 ? lhs / rhs : 0.0;
  rep.extra["iterations"] = sol.iterations;
  rep.extra["residual"] = sol.residual_norm;
  return rep;
}

double quadratic_form_sum_of_squares(const Discretization& disc, std::span<const double> alpha) {
  const auto& s = disc.system();
  const auto& nl = disc.neighbors();
  const auto interior = s.interior();
  if (alpha.size() != interior.size()) throw InvalidArgument("alpha must have N_Omega entries");
  const double two_d = 2.0 * disc.dim();
  return reduce_sum(static_cast<std::ptrdiff_t>(interior.size()), [&](std::ptrdiff_t aa) {
    const auto a = static_cast<std::size_t>(aa);
    const std::size_t i = interior[a];
    const double vi = s.volume(i);
    const auto nbr = nl.neighbors(i);
    const auto r = nl.distances(i);
    const auto w = disc.pair_weights(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      const std::size_t j = nbr[k];
      const double beta = two_d * w[k] / (r[k] * r[k]);
      if (s.in_omega(j)) {
        if (j <= i) continue;
        const double vj = s.volume(j);
        const double aj = alpha[static_cast<std::size_t>(s.interior_rank(j))];
        const double diff = vj * alpha[a] - vi * aj;
        acc += diff * diff / (vi * vj) * beta;
      } else {
        acc += alpha[a] * alpha[a] * (s.volume(j) / vi) * beta;
      }
    }
    return acc;
  });
}

IdentityReport spd_witness(const Discretization& disc) {
  const auto& s = disc.system();
  const ConnectivityReport conn = check_h_connectivity(s, disc.neighbors(), 0);
  if (conn.connected) {
    const AssembledSystem as = assemble(disc);
    const DenseMatrix a = to_dense(as.A);
    const auto n = static_cast<Eigen::Index>(a.n);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(a.data.data(), n, n);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    double min_pivot = 0.0;
    if (llt.info() == Eigen::Success) {
      const Eigen::MatrixXd l = llt.matrixL();
      min_pivot = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i) min_pivot = std::min(min_pivot, l(i, i) * l(i, i));
    }
    IdentityReport rep;
    rep.name = "thm1.spd";
    rep.relation = Relation::positive;
    rep.lhs = min_pivot;
    rep.rhs = 0.0;
    rep.pass = llt.info() == Eigen::Success && min_pivot > 0.0;
    rep.extra["n_omega"] = static_cast<double>(a.n);
    return rep;
  }

  // Unreachable components contain no Gamma_H particle, so D 1_C is a null vector of A.
  std::vector<double> alpha(s.interior().size(), 0.0);
  std::size_t members = 0;
  if (!conn.unreachable_interior.empty()) {
    const auto label = conn.component_labels[conn.unreachable_interior.front()];
    for (auto i : s.interior())
      if (conn.component_labels[i] == label) {
        alpha[static_cast<std::size_t>(s.interior_rank(i))] = s.volume(i);
        ++members;
      }
  }
  auto rep = absolute_report("thm1.singular_witness", quadratic_form_sum_of_squares(disc, alpha), 0.0, 1e-15);
  rep.pass = rep.pass && members > 0;
  rep.extra["component_size"] = static_cast<double>(members);
  return rep;
}

namespace {

// Index of the particle at x_i + sign * dx * e_axis among i's neighbours, or -1.
std::int64_t axis_neighbor(const Discretization& disc, std::size_t i, double dx, int axis, int sign) {
  const auto& s = disc.system();
  Vec3 target = s.position(i);
  target[axis] += sign * dx;
  for (auto j : disc.neighbors().neighbors(i)) {
    const Vec3 diff = s.position(j) - target;
    if (std::max({std::abs(diff[0]), std::abs(diff[1]), std::abs(diff[2])}) <= 1e-6 * dx) return j;
  }
  return -1;
}

}  // namespace

FvmStencil fvm_laplacian(const Discretization& disc, double dx, const ScalarField& phi) {
  const std::size_t n = disc.size();
  FvmStencil out{std::vector<double>(n, 0.0), std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    bool full = true;
    for (int axis = 0; axis < disc.dim() && full; ++axis)
      for (int sign : {-1, 1}) {
        const auto j = axis_neighbor(disc, i, dx, axis, sign);
        if (j < 0) {
          full = false;
          break;
        }
        acc += (phi[static_cast<std::size_t>(j)] - phi[i]) / (dx * dx);
      }
    out.full[i] = full;
    out.values[i] = full ? acc : 0.0;
  }
  return out;
}

FvmStencil fvm_divergence(const Discretization& disc, double dx, const VectorField& psi) {
  const std::size_t n = disc.size();
  FvmStencil out{std::vector<double>(n, 0.0), std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    bool full = true;
    for (int axis = 0; axis < disc.dim() && full; ++axis)
      for (int sign : {-1, 1}) {
        const auto j = axis_neighbor(disc, i, dx, axis, sign);
        if (j < 0) {
          full = false;
          break;
        }
        // (psi_j + psi_i)/r . (x_j - x_i)/r with r = dx
        acc += sign * (psi[static_cast<std::size_t>(j)][axis] + psi[i][axis]) / dx;
      }
    out.full[i] = full;
    out.values[i] = full ? 0.5 * acc : 0.0;
  }
  return out;
}

FvmReport check_fvm_equivalence(const Discretization& disc, double dx, const ScalarField& phi,
                                const VectorField& psi) {
  const auto lap = apply_lap(disc, phi);
  const auto div = apply_div_plus(disc, psi);
  const auto lap_ref = fvm_laplacian(disc, dx, phi);
  const auto div_ref = fvm_divergence(disc, dx, psi);
  double lap_gap = 0.0, div_gap = 0.0;
  std::size_t compared = 0;
  for (std::size_t i = 0; i < disc.size(); ++i) {
    if (!lap_ref.full[i]) continue;
    ++compared;
    lap_gap = std::max(lap_gap, std::abs(lap[i] - lap_ref.values[i]));
    div_gap = std::max(div_gap, std::abs(div[i] - div_ref.values[i]));
  }
  FvmReport rep{absolute_report("fvm.laplacian", lap_gap, 0.0, 1e-12),
                absolute_report("fvm.divergence", div_gap, 0.0, 1e-12), compared};
  rep.laplacian.pass = rep.laplacian.pass && compared > 0;
  rep.divergence.pass = rep.divergence.pass && compared > 0;
  rep.laplacian.extra["compared"] = rep.divergence.extra["compared"] = static_cast<double>(compared);
  return rep;
}

WeightFunction shell_weight(int dim) {
  return WeightFunction::table({0.0, 0.25, 0.3, 0.95, 0.98, 1.0}, {0.02, 0.02, 1.0, 1.0, 0.02, 0.0}, dim);
}

Discretization calibrated_lattice(int dim, double dx, const WeightFunction& w) {
  const std::vector<double> lo(static_cast<std::size_t>(dim), 0.0), hi(static_cast<std::size_t>(dim), 1.0);
  const Domain domain = make_box_domain(dim, lo, hi, 2.0 * dx);
  const ParticleSystem lattice = generate_lattice(domain, dx);
  const double ceiling = dim == 1 ? 2.0 * dx : std::sqrt(2.0) * dx;
  // dx / h stays below 0.95, on the plateau of shell_weight.
  const double h = calibrate_lattice_h(w, dx, {dx / 0.95, ceiling * (1.0 - 1e-9)}, lattice.volume(0));
  return Discretization(set_influence_radius(lattice, h), w);
}

std::string draw_id(std::uint64_t seed, int dim, bool perturbed) {
  return "draw-" + std::to_string(seed) + "-d" + std::to_string(dim) + (perturbed ? "-perturbed" : "-lattice");
}

Discretization random_system(std::uint64_t seed, int dim, bool perturbed, std::size_t max_particles,
                             int kernel_p) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> lo(static_cast<std::size_t>(dim)), hi(static_cast<std::size_t>(dim));
  double omega_measure = 1.0;
  for (int k = 0; k < dim; ++k) {
    lo[static_cast<std::size_t>(k)] = unit(rng) - 0.5;
    hi[static_cast<std::size_t>(k)] = lo[static_cast<std::size_t>(k)] + 0.5 + unit(rng);
    omega_measure *= hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)];
  }
  const double h_ratio = 1.8 + 0.8 * unit(rng);
  const double dilation_ratio = h_ratio + 0.1 + 0.5 * unit(rng);
  const double lo_frac = dim == 3 ? 0.6 : dim == 2 ? 0.3 : 0.1;
  const double target = static_cast<double>(max_particles) * (lo_frac + (1.0 - lo_frac) * unit(rng));

  // Spacing from N ~ |Omega_H| / dx^d, then adjust until the lattice fits.
  double dx = std::pow(omega_measure / target, 1.0 / dim);
  for (int it = 0; it < 50; ++it)
    dx = std::pow(make_box_domain(dim, lo, hi, dilation_ratio * dx).measure_omega_h() / target, 1.0 / dim);
  for (int attempt = 0; attempt < 200; ++attempt) {
    const Domain domain = make_box_domain(dim, lo, hi, dilation_ratio * dx);
    std::optional<ParticleSystem> lattice;
    try {
      lattice = generate_lattice(domain, dx);
    } catch (const InvalidArgument&) {
      dx *= 0.95;  // no interior particle yet
      continue;
    }
    if (lattice->size() > max_particles) {
      dx *= 1.05;
      continue;
    }
    ParticleSystem s = *lattice;
    if (perturbed) s = perturb_positions(s, 0.2 * dx, mix(seed, 7));
    return Discretization(set_influence_radius(s, h_ratio * dx), WeightFunction::polynomial(kernel_p, dim));
  }
  throw InvalidArgument("could not fit a random system under the particle limit");
}

Discretization two_cluster_system(std::uint64_t seed, int dim) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double side = 1.0 + 0.5 * unit(rng);
  const double h_ratio = 1.8 + 0.6 * unit(rng);
  const double dx = side / (dim == 1 ? 60.0 : dim == 2 ? 16.0 : 10.0);
  const double h = h_ratio * dx;
  const std::vector<double> lo(static_cast<std::size_t>(dim), 0.0), hi(static_cast<std::size_t>(dim), side);
  const Domain domain = make_box_domain(dim, lo, hi, (h_ratio + 0.3) * dx);
  const ParticleSystem lattice = generate_lattice(domain, dx);

  // Inner block |x - c|_inf <= a, empty shell (a, a + gap], gap > h.
  const double a = (0.12 + 0.08 * unit(rng)) * side;
  const double gap = 1.2 * h;
  Vec3 c{0, 0, 0};
  for (int k = 0; k < dim; ++k) c[k] = 0.5 * side;
  std::vector<Vec3> pos;
  std::vector<double> vol;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    double dist = 0.0;
    for (int k = 0; k < dim; ++k) dist = std::max(dist, std::abs(lattice.position(i)[k] - c[k]));
    if (dist > a && dist <= a + gap) continue;
    pos.push_back(lattice.position(i));
    vol.push_back(lattice.volume(i));
  }
  return Discretization(ParticleSystem::with_rescaled_volumes(domain, std::move(pos), std::move(vol), h, dx),
                        WeightFunction::polynomial(2, dim));
}

IdentityReport check_duality(const Discretization& disc, const ScalarField& y) {
  const auto& s = disc.system();
  if (!vanishes_on_gamma_h(s, y)) throw InvalidArgument("duality check needs y in V_h");
  const AssembledSystem as = assemble(disc);
  std::vector<double> dy(as.size()), ady(as.size());
  for (std::size_t a = 0; a < as.size(); ++a) dy[a] = as.D[a] * y[as.interior[a]];
  as.A.multiply(dy, ady);
  const ScalarField lap = apply_lap(disc, y);
  double diff2 = 0.0, lhs2 = 0.0, rhs2 = 0.0;
  for (std::size_t a = 0; a < as.size(); ++a) {
    const double m = -lap[as.interior[a]];
    diff2 += (ady[a] - m) * (ady[a] - m);
    lhs2 += ady[a] * ady[a];
    rhs2 += m * m;
  }
  IdentityReport rep;
  rep.name = "thm1.duality";
  rep.relation = Relation::equal;
  rep.lhs = std::sqrt(lhs2);
  rep.rhs = std::sqrt(rhs2);
  rep.abs_gap = std::sqrt(diff2);
  rep.rel_gap = rep.rhs > 0.0 ? rep.abs_gap / rep.rhs : rep.abs_gap;
  rep.tolerance = 1e-13;
  rep.pass = rep.rel_gap <= rep.tolerance;
  return rep;
}

VectorField single_particle_source(const ParticleSystem& s, std::size_t k) {
  if (k >= s.size() || !s.in_omega(k)) throw InvalidArgument("single-particle source needs an interior particle");
  VectorField f = VectorField::zeros(s.size());
  f[k][0] = 1.0 / s.volume(k);
  return f;
}

ScalarField random_scalar(const ParticleSystem& s, std::uint64_t seed) {
  std::mt19937_64 rng(mix(seed, 1));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField f = ScalarField::zeros(s.size());
  for (auto& v : f.values) v = u(rng);
  return f;
}

VectorField random_vector(const ParticleSystem& s, std::uint64_t seed) {
  std::mt19937_64 rng(mix(seed, 2));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VectorField f = VectorField::zeros(s.size());
  for (auto& v : f.values)
    for (int k = 0; k < s.dim(); ++k) v[k] = u(rng);
  return f;
}

ScalarField random_scalar_vh(const ParticleSystem& s, std::uint64_t seed) {
  return project_to_vh(s, random_scalar(s, seed));
}

VectorField random_vector_vh(const ParticleSystem& s, std::uint64_t seed) {
  return project_to_vh(s, random_vector(s, seed));
}

ManufacturedCase ManufacturedCase::sin2(int dim, std::vector<double> spacings, bool divergence_free_part,
                                        Vec3 lower, Vec3 upper) {
  if (dim < 1 || dim > 3) throw InvalidArgument("manufactured case dimension must be 1, 2 or 3");
  if (divergence_free_part && dim != 2) throw InvalidArgument("divergence-free part is only defined for d = 2");
  constexpr double pi = std::numbers::pi;
  ManufacturedCase mc;
  mc.name = divergence_free_part ? "sin2-curl-v1" : "sin2-v1";
  mc.dim = dim;
  mc.lower = lower;
  mc.upper = upper;
  mc.spacings = std::move(spacings);
  Vec3 len{1, 1, 1};
  for (int k = 0; k < dim; ++k) len[k] = upper[k] - lower[k];
  // Per axis: s_k = sin^2(pi t_k), ds_k/dx = (pi / L_k) sin(2 pi t_k).
  auto factors = [=](const Vec3& x, Vec3& s, Vec3& ds) {
    for (int k = 0; k < 3; ++k) {
      if (k >= dim) {
        s[k] = 1.0;
        ds[k] = 0.0;
        continue;
      }
      const double t = (x[k] - lower[k]) / len[k];
      s[k] = std::pow(std::sin(pi * t), 2);
      ds[k] = pi / len[k] * std::sin(2.0 * pi * t);
    }
  };
  mc.u = [=](const Vec3& x) {
    Vec3 s, ds;
    factors(x, s, ds);
    return s[0] * s[1] * s[2];
  };
  mc.f = [=](const Vec3& x) {
    Vec3 s, ds;
    factors(x, s, ds);
    Vec3 g{0, 0, 0};
    for (int k = 0; k < dim; ++k) {
      double v = ds[k];
      for (int m = 0; m < dim; ++m)
        if (m != k) v *= s[m];
      g[k] = -v;
    }
    if (divergence_free_part) {
      // curl of the stream function s_0 s_1
      g[0] += s[0] * ds[1];
      g[1] -= ds[0] * s[1];
    }
    return g;
  };
  return mc;
}

ManufacturedCase ManufacturedCase::zero(int dim, std::vector<double> spacings) {
  ManufacturedCase mc;
  mc.name = "zero-v1";
  mc.dim = dim;
  mc.spacings = std::move(spacings);
  mc.u = [](const Vec3&) { return 0.0; };
  mc.f = [](const Vec3&) { return Vec3{0, 0, 0}; };
  return mc;
}

double ManufacturedCase::boundary_violation(std::size_t samples) const {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec3 x{0, 0, 0};
    for (int k = 0; k < dim; ++k) x[k] = lower[k] + unit(rng) * (upper[k] - lower[k]);
    const int face = static_cast<int>(s % static_cast<std::size_t>(2 * dim));
    x[face / 2] = face % 2 == 0 ? lower[face / 2] : upper[face / 2];
    worst = std::max({worst, std::abs(u(x)), norm(f(x))});
  }
  return worst;
}

ScalarField sample_scalar(const ParticleSystem& s, const std::function<double(const Vec3&)>& fn) {
  ScalarField out = ScalarField::zeros(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = fn(s.position(i));
  return out;
}

VectorField sample_vector(const ParticleSystem& s, const std::function<Vec3(const Vec3&)>& fn) {
  VectorField out = VectorField::zeros(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    out[i] = fn(s.position(i));
    for (int k = s.dim(); k < 3; ++k) out[i][k] = 0.0;
  }
  return out;
}

std::vector<ManufacturedLevel> run_manufactured(const ManufacturedCase& mc, const WeightFunction& w,
                                                const SolveOptions& opts) {
  std::vector<ManufacturedLevel> levels;
  const std::vector<double> lo(mc.lower.begin(), mc.lower.begin() + mc.dim);
  const std::vector<double> hi(mc.upper.begin(), mc.upper.begin() + mc.dim);
  for (double dx : mc.spacings) {
    const Domain domain = make_box_domain(mc.dim, lo, hi, mc.dilation_ratio * dx);
    const ParticleSystem lattice = generate_lattice(domain, dx);
    const Discretization disc(set_influence_radius(lattice, mc.h_ratio * dx), w);
    const auto& s = disc.system();
    const VectorField f = sample_vector(s, mc.f);
    const SolveResult sol = solve_poisson(disc, f, opts);

    const ScalarField exact = project_to_vh(s, sample_scalar(s, mc.u));
    ScalarField err = sol.u;
    for (std::size_t i = 0; i < s.size(); ++i) err[i] -= exact[i];

    ManufacturedLevel lv;
    lv.spacing = dx;
    lv.h = disc.h();
    lv.n = s.size();
    lv.n_omega = s.interior().size();
    lv.error_l2 = norm_l2(s, err, Region::omega);
    lv.error_h1 = seminorm_h10(disc, err, Region::omega);
    lv.c0 = semi_regular_constant(disc).c0;
    lv.iterations = sol.iterations;
    lv.residual = sol.residual_norm;
    levels.push_back(lv);
  }
  return levels;
}

void write_manufactured_csv(std::ostream& out, const std::vector<ManufacturedLevel>& levels) {
  out << "spacing,h,n,n_omega,error_l2,error_h1,c0,iterations,residual\n";
  out << std::setprecision(17);
  for (const auto& lv : levels)
    out << lv.spacing << ',' << lv.h << ',' << lv.n << ',' << lv.n_omega << ',' << lv.error_l2 << ','
        << lv.error_h1 << ',' << lv.c0 << ',' << lv.iterations << ',' << lv.residual << '\n';
}

}  // namespace gpm
