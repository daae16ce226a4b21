#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gpm/geometry.hpp"
#include "gpm/operators.hpp"

namespace gpm {

// h-connectivity verdict. component_labels assigns every particle the label
// of its connected component in the pair graph (edges 0 < r_ij < h).
struct ConnectivityReport {
  bool connected = false;
  std::vector<std::uint32_t> unreachable_interior;
  std::vector<std::int64_t> component_labels;
  // Index chains i = i_1, ..., i_K: consecutive hops shorter than h, all but
  // the last in Lambda(Omega), the last in Lambda(Gamma_H).
  std::vector<std::vector<std::uint32_t>> witness_paths;
  std::string diagnostic;
};

// Multi-source BFS from every Gamma_H particle, stepping only into
// Omega particles. Witness paths for up to `witness_samples` interior
// particles spread evenly over the interior index set.
ConnectivityReport check_h_connectivity(const ParticleSystem& system, const NeighborList& neighbors,
                                        std::size_t witness_samples = 5);

struct SemiRegularReport {
  double c0 = 0.0;
  std::size_t argmax_index = 0;
};

// c0 = max_i sum_{j!=i} V_j w_h(r_ij).
SemiRegularReport semi_regular_constant(const Discretization& disc);

enum class Region { omega, gamma_h, omega_h };

const char* region_name(Region r);

// sum_{i in Lambda(S)} V_i phi_i psi_i (dot product for vector fields).
double inner_product(const ParticleSystem& system, const ScalarField& phi, const ScalarField& psi,
                     Region region);
double inner_product(const ParticleSystem& system, const VectorField& phi, const VectorField& psi,
                     Region region);

double norm_l2(const ParticleSystem& system, const ScalarField& phi, Region region);
double norm_l2(const ParticleSystem& system, const VectorField& phi, Region region);

// (d sum_{i in Lambda(S)} V_i sum_{j!=i} V_j |phi_j - phi_i|^2 / r^2 w_h(r))^(1/2).
// The inner sum runs over all particles.
double seminorm_h10(const Discretization& disc, const ScalarField& phi, Region region);
double seminorm_h10(const Discretization& disc, const VectorField& phi, Region region);

}  // namespace gpm
