#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gpm/vec.hpp"

namespace gpm {

// Axis-aligned box Omega = (lower, upper) together with its open
// H-dilation Omega_H = {x : dist(x, Omega) < H}.
class Domain {
 public:
  // Throws InvalidArgument for d outside {1,2,3}, H <= 0 or a degenerate box.
  static Domain box(int dim, std::span<const double> lower, std::span<const double> upper,
                    double dilation);

  int dim() const { return dim_; }
  const Vec3& lower() const { return lower_; }
  const Vec3& upper() const { return upper_; }
  double dilation() const { return dilation_; }
  // |Omega_H|: box (+) ball of radius H, by the Steiner formula.
  double measure_omega_h() const { return measure_omega_h_; }
  double measure_omega() const;

  double distance_to_omega(const Vec3& x) const;
  bool in_omega(const Vec3& x) const;
  bool in_omega_h(const Vec3& x) const { return distance_to_omega(x) < dilation_; }
  bool in_gamma_h(const Vec3& x) const { return !in_omega(x) && in_omega_h(x); }

 private:
  friend class ParticleSystem;
  Domain() = default;

  int dim_ = 0;
  Vec3 lower_{};
  Vec3 upper_{};
  double dilation_ = 0.0;
  double measure_omega_h_ = 0.0;
};

// Particle positions X_N, volumes V_N, influence radius h and the
// Lambda(Omega) / Lambda(Gamma_H) index sets. Immutable once built.
class ParticleSystem {
 public:
  // Validates every invariant: distinct positions inside Omega_H, positive
  // volumes summing to |Omega_H| (relative 1e-12) and, when given,
  // min_{i!=j} |x_i - x_j| < h < H.
  static ParticleSystem create(Domain domain, std::vector<Vec3> positions,
                               std::vector<double> volumes,
                               std::optional<double> influence_radius = std::nullopt,
                               double spacing = 0.0);

  // Same as create() after rescaling volumes by one global factor so that
  // they sum to |Omega_H|.
  static ParticleSystem with_rescaled_volumes(Domain domain, std::vector<Vec3> positions,
                                              std::vector<double> volumes,
                                              std::optional<double> influence_radius = std::nullopt,
                                              double spacing = 0.0);

  const Domain& domain() const { return domain_; }
  int dim() const { return domain_.dim(); }
  std::size_t size() const { return positions_.size(); }
  std::span<const Vec3> positions() const { return positions_; }
  std::span<const double> volumes() const { return volumes_; }
  const Vec3& position(std::size_t i) const { return positions_[i]; }
  double volume(std::size_t i) const { return volumes_[i]; }

  bool has_influence_radius() const { return influence_radius_.has_value(); }
  // Throws InvalidArgument when unset.
  double influence_radius() const;
  // Lattice spacing of the generator, 0 when unknown.
  double spacing() const { return spacing_; }

  bool in_omega(std::size_t i) const { return in_omega_[i] != 0; }
  std::span<const std::uint32_t> interior() const { return interior_; }
  std::span<const std::uint32_t> boundary() const { return boundary_; }
  // Position of particle i in the interior renumbering, -1 for Gamma_H particles.
  std::int64_t interior_rank(std::size_t i) const { return interior_rank_[i]; }

  double min_pair_distance() const { return min_pair_distance_; }

 private:
  ParticleSystem() = default;

  Domain domain_;
  std::vector<Vec3> positions_;
  std::vector<double> volumes_;
  std::optional<double> influence_radius_;
  double spacing_ = 0.0;
  double min_pair_distance_ = 0.0;
  std::vector<std::uint8_t> in_omega_;
  std::vector<std::uint32_t> interior_;
  std::vector<std::uint32_t> boundary_;
  std::vector<std::int64_t> interior_rank_;
};

// Pairs with 0 < r_ij < h in compressed-row form, each row sorted by index.
class NeighborList {
 public:
  NeighborList() = default;
  NeighborList(std::vector<std::size_t> offsets, std::vector<std::uint32_t> indices,
               std::vector<double> distances);

  std::size_t size() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const std::uint32_t> neighbors(std::size_t i) const {
    return {indices_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> distances(std::size_t i) const {
    return {distances_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t begin_of(std::size_t i) const { return offsets_[i]; }
  std::size_t directed_pair_count() const { return indices_.size(); }

  bool operator==(const NeighborList&) const = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<std::uint32_t> indices_;
  std::vector<double> distances_;
};

Domain make_box_domain(int dim, std::span<const double> lower, std::span<const double> upper,
                       double dilation);

// Cell-centred lattice of the given spacing, centred in Omega, clipped to
// Omega_H. Volumes are spacing^d rescaled to sum to |Omega_H|.
ParticleSystem generate_lattice(const Domain& domain, double spacing);

// Uniform random shift in [-magnitude, magnitude]^d per particle. A shift is
// rejected (particle stays put) when it would change the particle's region.
ParticleSystem perturb_positions(const ParticleSystem& system, double magnitude,
                                 std::uint64_t seed);

ParticleSystem set_influence_radius(const ParticleSystem& system, double h);

// Uniform-grid cell list with cell size h.
NeighborList build_neighbor_list(const ParticleSystem& system);

}  // namespace gpm
