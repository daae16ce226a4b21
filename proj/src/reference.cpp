#include "gpm/reference.hpp"

namespace gpm::reference {

NeighborList brute_force_neighbors(const ParticleSystem& s) {
  const double h = s.influence_radius();
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> idx;
  std::vector<double> dist;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      const double r = norm(s.position(j) - s.position(i));
      if (r < h) {
        idx.push_back(static_cast<std::uint32_t>(j));
        dist.push_back(r);
      }
    }
    offsets.push_back(idx.size());
  }
  return {std::move(offsets), std::move(idx), std::move(dist)};
}

ScalarField div_plus(const ParticleSystem& s, const WeightFunction& w, const VectorField& psi) {
  const double h = s.influence_radius();
  const int d = s.dim();
  ScalarField out = ScalarField::zeros(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      const Vec3 e = s.position(j) - s.position(i);
      const double r = norm(e);
      if (r >= h) continue;
      acc += s.volume(j) * dot(psi[j] + psi[i], e) / (r * r) * w.scaled(h, r);
    }
    out[i] = d * acc;
  }
  return out;
}

VectorField grad(const ParticleSystem& s, const WeightFunction& w, const ScalarField& phi) {
  const double h = s.influence_radius();
  const int d = s.dim();
  VectorField out = VectorField::zeros(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    Vec3 acc{0, 0, 0};
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      const Vec3 e = s.position(j) - s.position(i);
      const double r = norm(e);
      if (r >= h) continue;
      acc += (s.volume(j) * (phi[j] - phi[i]) / (r * r) * w.scaled(h, r)) * e;
    }
    out[i] = static_cast<double>(d) * acc;
  }
  return out;
}

ScalarField lap(const ParticleSystem& s, const WeightFunction& w, const ScalarField& phi, LaplacianVolume volume) {
  const double h = s.influence_radius();
  const int d = s.dim();
  ScalarField out = ScalarField::zeros(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      const double r = norm(s.position(j) - s.position(i));
      if (r >= h) continue;
      const double v = volume == LaplacianVolume::neighbor ? s.volume(j) : s.volume(i);
      acc += v * (phi[j] - phi[i]) / (r * r) * w.scaled(h, r);
    }
    out[i] = 2.0 * d * acc;
  }
  return out;
}

void multiply(const CsrMatrix& m, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < m.rows; ++i) {
    double acc = 0.0;
    for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) acc += m.val[k] * x[m.col[k]];
    y[i] = acc;
  }
}

}  // namespace gpm::reference
