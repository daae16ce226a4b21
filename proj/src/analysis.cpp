#include "gpm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "gpm/error.hpp"
#include "gpm/parallel.hpp"

namespace gpm {

namespace {

bool in_region(const ParticleSystem& s, std::size_t i, Region r) {
  switch (r) {
    case Region::omega: return s.in_omega(i);
    case Region::gamma_h: return !s.in_omega(i);
    default: return true;
  }
}

std::vector<std::int64_t> label_components(const NeighborList& nl) {
  const std::size_t n = nl.size();
  std::vector<std::int64_t> label(n, -1);
  std::int64_t next = 0;
  std::vector<std::uint32_t> stack;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.assign(1, static_cast<std::uint32_t>(s));
    while (!stack.empty()) {
      const auto v = stack.back();
      stack.pop_back();
      for (auto j : nl.neighbors(v))
        if (label[j] < 0) {
          label[j] = next;
          stack.push_back(j);
        }
    }
    ++next;
  }
  return label;
}

template <class Field>
void check_sizes(const ParticleSystem& s, const Field& a, const Field& b) {
  if (a.size() != s.size() || b.size() != s.size()) throw InvalidArgument("field/system size mismatch");
}

double squared_difference(double a, double b) { return (a - b) * (a - b); }
double squared_difference(const Vec3& a, const Vec3& b) { return norm2(a - b); }
double product(double a, double b) { return a * b; }
double product(const Vec3& a, const Vec3& b) { return dot(a, b); }

template <class Field>
double inner_product_impl(const ParticleSystem& s, const Field& phi, const Field& psi, Region region) {
  check_sizes(s, phi, psi);
  return reduce_sum(static_cast<std::ptrdiff_t>(s.size()), [&](std::ptrdiff_t ii) {
    const auto i = static_cast<std::size_t>(ii);
    return in_region(s, i, region) ? s.volume(i) * product(phi[i], psi[i]) : 0.0;
  });
}

template <class Field>
double seminorm_impl(const Discretization& disc, const Field& phi, Region region) {
  const auto& s = disc.system();
  if (phi.size() != s.size()) throw InvalidArgument("field/system size mismatch");
  const auto& nl = disc.neighbors();
  const double sum = reduce_sum(static_cast<std::ptrdiff_t>(s.size()), [&](std::ptrdiff_t ii) {
    const auto i = static_cast<std::size_t>(ii);
    if (!in_region(s, i, region)) return 0.0;
    const auto nbr = nl.neighbors(i);
    const auto r = nl.distances(i);
    const auto w = disc.pair_weights(i);
    double inner = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k)
      inner += s.volume(nbr[k]) * squared_difference(phi[nbr[k]], phi[i]) / (r[k] * r[k]) * w[k];
    return s.volume(i) * inner;
  });
  return std::sqrt(disc.dim() * sum);
}

}  // namespace

ConnectivityReport check_h_connectivity(const ParticleSystem& system, const NeighborList& neighbors,
                                        std::size_t witness_samples) {
  const std::size_t n = system.size();
  if (neighbors.size() != n) throw InvalidArgument("neighbor list does not match the particle system");
  ConnectivityReport rep;
  rep.component_labels = label_components(neighbors);

  constexpr std::int64_t unseen = -2, root = -1;
  std::vector<std::int64_t> parent(n, unseen);
  std::deque<std::uint32_t> queue;
  for (auto b : system.boundary()) {
    parent[b] = root;
    queue.push_back(b);
  }
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (auto j : neighbors.neighbors(v)) {
      if (parent[j] != unseen || !system.in_omega(j)) continue;
      parent[j] = v;
      queue.push_back(j);
    }
  }

  for (auto i : system.interior())
    if (parent[i] == unseen) rep.unreachable_interior.push_back(i);
  rep.connected = rep.unreachable_interior.empty() && !system.boundary().empty();
  if (system.boundary().empty()) rep.diagnostic = "no particles in Gamma_H";
  else if (!rep.connected)
    rep.diagnostic = std::to_string(rep.unreachable_interior.size()) +
                     " interior particle(s) have no path to Gamma_H";

  const auto interior = system.interior();
  const std::size_t samples = std::min(witness_samples, interior.size());
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t i = interior[s * interior.size() / samples];
    if (parent[i] == unseen) continue;
    std::vector<std::uint32_t> path{static_cast<std::uint32_t>(i)};
    for (auto v = parent[i]; v != root; v = parent[static_cast<std::size_t>(v)])
      path.push_back(static_cast<std::uint32_t>(v));
    rep.witness_paths.push_back(std::move(path));
  }
  return rep;
}

SemiRegularReport semi_regular_constant(const Discretization& disc) {
  const auto& s = disc.system();
  const auto& nl = disc.neighbors();
  std::vector<double> sums(s.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(s.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto nbr = nl.neighbors(i);
    const auto w = disc.pair_weights(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k) acc += s.volume(nbr[k]) * w[k];
    sums[i] = acc;
  }
  SemiRegularReport rep;
  for (std::size_t i = 0; i < sums.size(); ++i)
    if (sums[i] > rep.c0) {
      rep.c0 = sums[i];
      rep.argmax_index = i;
    }
  return rep;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::omega: return "Omega";
    case Region::gamma_h: return "Gamma_H";
    default: return "Omega_H";
  }
}

double inner_product(const ParticleSystem& system, const ScalarField& phi, const ScalarField& psi,
                     Region region) {
  return inner_product_impl(system, phi, psi, region);
}

double inner_product(const ParticleSystem& system, const VectorField& phi, const VectorField& psi,
                     Region region) {
  return inner_product_impl(system, phi, psi, region);
}

double norm_l2(const ParticleSystem& system, const ScalarField& phi, Region region) {
  return std::sqrt(std::max(0.0, inner_product(system, phi, phi, region)));
}

double norm_l2(const ParticleSystem& system, const VectorField& phi, Region region) {
  return std::sqrt(std::max(0.0, inner_product(system, phi, phi, region)));
}

double seminorm_h10(const Discretization& disc, const ScalarField& phi, Region region) {
  return seminorm_impl(disc, phi, region);
}

double seminorm_h10(const Discretization& disc, const VectorField& phi, Region region) {
  return seminorm_impl(disc, phi, region);
}

}  // namespace gpm
