#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "gpm/geometry.hpp"
#include "gpm/kernels.hpp"
#include "gpm/vec.hpp"

namespace gpm {

// Per-particle scalar values. in_vh marks membership in V_h (zero on Gamma_H).
struct ScalarField {
  std::vector<double> values;
  bool in_vh = false;

  static ScalarField zeros(std::size_t n) { return {std::vector<double>(n, 0.0), false}; }
  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
};

// Per-particle d-vectors; components >= d are zero.
struct VectorField {
  std::vector<Vec3> values;
  bool in_vh = false;

  static VectorField zeros(std::size_t n) { return {std::vector<Vec3>(n, Vec3{0, 0, 0}), false}; }
  std::size_t size() const { return values.size(); }
  const Vec3& operator[](std::size_t i) const { return values[i]; }
  Vec3& operator[](std::size_t i) { return values[i]; }
};

// True when every Gamma_H value is exactly zero (whatever the flag says).
bool vanishes_on_gamma_h(const ParticleSystem& system, const ScalarField& f);
bool vanishes_on_gamma_h(const ParticleSystem& system, const VectorField& f);

// Zero the Gamma_H values and set in_vh.
ScalarField project_to_vh(const ParticleSystem& system, ScalarField f);
VectorField project_to_vh(const ParticleSystem& system, VectorField f);

// Particle system, weight and neighbour list bound together, with w_h(r_ij)
// cached for every stored pair.
class Discretization {
 public:
  // Requires the influence radius to be set and weight.dim() == system.dim().
  Discretization(ParticleSystem system, WeightFunction weight);

  const ParticleSystem& system() const { return system_; }
  const WeightFunction& weight() const { return weight_; }
  const NeighborList& neighbors() const { return neighbors_; }
  int dim() const { return system_.dim(); }
  std::size_t size() const { return system_.size(); }
  double h() const { return h_; }
  // w_h(r_ij), aligned with neighbors().neighbors(i).
  std::span<const double> pair_weights(std::size_t i) const {
    return {weights_.data() + neighbors_.begin_of(i), neighbors_.neighbors(i).size()};
  }

 private:
  ParticleSystem system_;
  WeightFunction weight_;
  NeighborList neighbors_;
  double h_;
  std::vector<double> weights_;
};

// Which volume multiplies the Laplacian summand: V_j (consistent with the
// assembled matrix) or V_i (the alternative printed form).
enum class LaplacianVolume { neighbor, self };

// d sum_{j!=i} V_j ((psi_j + psi_i).(x_j - x_i) / r^2) w_h(r), at every particle.
ScalarField apply_div_plus(const Discretization& disc, const VectorField& psi);
// d sum_{j!=i} V_j ((phi_j - phi_i) / r) ((x_j - x_i) / r) w_h(r).
VectorField apply_grad(const Discretization& disc, const ScalarField& phi);
// 2d sum_{j!=i} V_j ((phi_j - phi_i) / r^2) w_h(r).
ScalarField apply_lap(const Discretization& disc, const ScalarField& phi,
                      LaplacianVolume volume = LaplacianVolume::neighbor);

// beta = 2d w/r^2, gamma = d w/r^2, Gamma = d (x_j - x_i) w/r^2 for every
// stored directed pair, in neighbour-list order.
struct InteractionCoefficients {
  std::vector<double> beta;
  std::vector<double> gamma;
  std::vector<Vec3> grad;
};
InteractionCoefficients interaction_coefficients(const Discretization& disc);

// Compressed-row matrix; symmetric matrices store both (i,j) and (j,i).
struct CsrMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  // y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  double at(std::size_t i, std::size_t j) const;
};

struct DenseMatrix {
  std::size_t n = 0;
  std::vector<double> data;  // row-major n x n

  double operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
};

inline constexpr std::size_t kDenseLimit = 2000;

// Throws InvalidArgument beyond kDenseLimit rows.
DenseMatrix to_dense(const CsrMatrix& m);

// A (interior x interior) and D = diag(V_i) over the interior renumbering,
// which keeps the original particle order.
struct AssembledSystem {
  CsrMatrix A;
  std::vector<double> D;
  std::vector<std::uint32_t> interior;  // rank -> particle index
  // Some interior row has a zero diagonal (no interacting partner).
  bool degenerate = false;

  std::size_t size() const { return D.size(); }
};

AssembledSystem assemble(const Discretization& disc);

// MatrixMarket "coordinate real general", 1-based indices.
void write_matrix_market(std::ostream& out, const CsrMatrix& m);

}  // namespace gpm
