#pragma once

#include <vector>

#include "gpm/geometry.hpp"

namespace fx {

// Omega = (-0.05, 0.05), H = 0.7, |Omega_H| = 1.5, three particles of volume 0.5.
inline gpm::ParticleSystem three_particles(double x2, double x3, double h) {
  const std::vector<double> lo{-0.05}, hi{0.05};
  const auto dom = gpm::Domain::box(1, lo, hi, 0.7);
  return gpm::ParticleSystem::create(dom, {{0, 0, 0}, {x2, 0, 0}, {x3, 0, 0}}, {0.5, 0.5, 0.5}, h);
}

inline gpm::ParticleSystem unit_lattice(int d, double dx, double h_ratio, double H_ratio) {
  const std::vector<double> lo(d, 0.0), hi(d, 1.0);
  return gpm::set_influence_radius(gpm::generate_lattice(gpm::Domain::box(d, lo, hi, H_ratio * dx), dx), h_ratio * dx);
}

}  // namespace fx
