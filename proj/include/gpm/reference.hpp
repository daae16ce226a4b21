#pragma once

#include "gpm/geometry.hpp"
#include "gpm/operators.hpp"

// Serial O(N^2) versions of the neighbour search and the operators, used as
// the baseline in tests and benchmarks.
namespace gpm::reference {

NeighborList brute_force_neighbors(const ParticleSystem& system);

ScalarField div_plus(const ParticleSystem& system, const WeightFunction& w, const VectorField& psi);
VectorField grad(const ParticleSystem& system, const WeightFunction& w, const ScalarField& phi);
ScalarField lap(const ParticleSystem& system, const WeightFunction& w, const ScalarField& phi,
                LaplacianVolume volume = LaplacianVolume::neighbor);

// Serial y = M x.
void multiply(const CsrMatrix& m, std::span<const double> x, std::span<double> y);

}  // namespace gpm::reference
