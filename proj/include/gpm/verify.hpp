#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gpm/analysis.hpp"
#include "gpm/operators.hpp"
#include "gpm/solver.hpp"

namespace gpm {

enum class Relation { equal, less_equal, greater_equal, positive };

// One mechanically checked statement: lhs (relation) rhs within tolerance.
struct IdentityReport {
  std::string name;
  std::string system_id;
  std::uint64_t seed = 0;
  Relation relation = Relation::equal;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  double tolerance = 0.0;
  bool absolute = false;  // tolerance applies to abs_gap instead of rel_gap
  bool pass = false;
  std::map<std::string, double> extra;
};

// |lhs - rhs| <= tol * max(|lhs|, |rhs|), or both exactly zero.
IdentityReport equality_report(std::string name, double lhs, double rhs, double rel_tol);
// lhs <= rhs * (1 + slack) (less_equal), lhs >= rhs * (1 - slack) (greater_equal).
IdentityReport inequality_report(std::string name, Relation rel, double lhs, double rhs, double slack);
// |lhs - rhs| <= abs_tol.
IdentityReport absolute_report(std::string name, double lhs, double rhs, double abs_tol);

const char* relation_symbol(Relation r);

// <div_plus psi, phi>_Omega = -<psi, grad_h phi>_Omega. Both fields must lie in V_h.
IdentityReport check_summation_by_parts(const Discretization& disc, const ScalarField& phi,
                                        const VectorField& psi);

struct EnergyReport {
  IdentityReport identity;   // -<lap_h phi, phi>_Omega = |phi|^2_{H1, Omega_H}
  IdentityReport region;     // |phi|^2_{H1, Omega_H} >= |phi|^2_{H1, Omega}
};
EnergyReport check_energy_identity(const Discretization& disc, const ScalarField& phi);

// ||grad_h phi||^2_{L2, Omega} <= d c0 |phi|^2_{H1, Omega}; extra["tightness"] = lhs / rhs.
IdentityReport check_gradient_bound(const Discretization& disc, const ScalarField& phi);

// Solves, then |u|_{H1, Omega} <= sqrt(d c0) ||f||_{L2, Omega} (1 + 1e-12).
IdentityReport check_stability(const Discretization& disc, const VectorField& f,
                               const SolveOptions& opts = {});

// Connected: Cholesky of A succeeds and lhs = min pivot > 0.
// Disconnected: alpha = D 1_C for an unreachable component C, and
// lhs = alpha^T A alpha by the sum-of-squares form, which must be <= 1e-15.
IdentityReport spd_witness(const Discretization& disc);

// alpha^T A alpha as
//   sum_{i<j} (V_j a_i - V_i a_j)^2 / (V_i V_j) beta_ij + sum_i a_i^2 sum_{k in Gamma_H} (V_k/V_i) beta_ik,
// alpha indexed by the interior renumbering.
double quadratic_form_sum_of_squares(const Discretization& disc, std::span<const double> alpha);

// Finite-volume stencils on a lattice of spacing dx, using the 2d axis
// neighbours at distance dx. full[i] is false where a neighbour is missing.
struct FvmStencil {
  std::vector<double> values;
  std::vector<bool> full;
};
FvmStencil fvm_laplacian(const Discretization& disc, double dx, const ScalarField& phi);
FvmStencil fvm_divergence(const Discretization& disc, double dx, const VectorField& psi);

struct FvmReport {
  IdentityReport laplacian;   // lhs = max |apply_lap - stencil| over full particles
  IdentityReport divergence;  // same for apply_div_plus
  std::size_t compared = 0;
};
FvmReport check_fvm_equivalence(const Discretization& disc, double dx, const ScalarField& phi,
                                const VectorField& psi);

// Tabulated weight, flat on r in [0.3, 0.95]. The lattice calibration root
// falls on the plateau in d = 1, 2, 3, so w_h(r) does not depend on r there.
WeightFunction shell_weight(int dim);

// Lattice over (0,1)^d with H = 2 dx and h calibrated so that
// 2d V w_h(dx) = 1 for the lattice volume V.
Discretization calibrated_lattice(int dim, double dx, const WeightFunction& w);

// Random box, lattice spacing and h in [1.8, 2.6] dx with N <= max_particles;
// perturbed systems are shifted by 0.2 dx. Deterministic in seed.
Discretization random_system(std::uint64_t seed, int dim, bool perturbed, std::size_t max_particles = 500,
                             int kernel_p = 2);
std::string draw_id(std::uint64_t seed, int dim, bool perturbed);

// Lattice over a random box with a shell of width > h emptied around an inner
// block, so the inner block is a second cluster not h-connected to Gamma_H.
Discretization two_cluster_system(std::uint64_t seed, int dim);

// A D y (assembled) against -lap_h y on Lambda(Omega) for y in V_h; lhs and
// rhs are the two L2 norms, rel_gap = ||A D y + lap_h y|| / ||lap_h y||.
IdentityReport check_duality(const Discretization& disc, const ScalarField& y);

// f = e_1 / V_k on the single interior particle k, zero elsewhere.
VectorField single_particle_source(const ParticleSystem& s, std::size_t k);

// i.i.d. uniform(-1, 1) values; the _vh variants zero Gamma_H.
ScalarField random_scalar(const ParticleSystem& s, std::uint64_t seed);
VectorField random_vector(const ParticleSystem& s, std::uint64_t seed);
ScalarField random_scalar_vh(const ParticleSystem& s, std::uint64_t seed);
VectorField random_vector_vh(const ParticleSystem& s, std::uint64_t seed);

// Exact solution u* with u* = grad u* = 0 on the boundary of Omega and
// source f* = -grad u* (+ optional divergence-free part).
struct ManufacturedCase {
  std::string name;
  int dim = 1;
  Vec3 lower{0, 0, 0};
  Vec3 upper{1, 1, 1};
  std::function<double(const Vec3&)> u;
  std::function<Vec3(const Vec3&)> f;
  std::vector<double> spacings;
  double h_ratio = 2.4;
  double dilation_ratio = 3.0;

  // u* = prod_k sin^2(pi (x_k - lower_k) / L_k) on the box ("sin2-v1").
  static ManufacturedCase sin2(int dim, std::vector<double> spacings, bool divergence_free_part = false,
                               Vec3 lower = {0, 0, 0}, Vec3 upper = {1, 1, 1});
  static ManufacturedCase zero(int dim, std::vector<double> spacings);

  // Largest |u*| and |f*| over `samples` points on the boundary of Omega.
  double boundary_violation(std::size_t samples = 1000) const;
};

struct ManufacturedLevel {
  double spacing = 0.0;
  double h = 0.0;
  std::size_t n = 0;
  std::size_t n_omega = 0;
  double error_l2 = 0.0;  // ||u - I u*||_{L2, Omega}
  double error_h1 = 0.0;  // |u - I u*|_{H1, Omega}, I u* zero on Gamma_H
  double c0 = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

std::vector<ManufacturedLevel> run_manufactured(const ManufacturedCase& mc, const WeightFunction& w,
                                                const SolveOptions& opts = {});
void write_manufactured_csv(std::ostream& out, const std::vector<ManufacturedLevel>& levels);

// Sample a closed-form field at the particles.
ScalarField sample_scalar(const ParticleSystem& s, const std::function<double(const Vec3&)>& fn);
VectorField sample_vector(const ParticleSystem& s, const std::function<Vec3(const Vec3&)>& fn);

}  // namespace gpm
