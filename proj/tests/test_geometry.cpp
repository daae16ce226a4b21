#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "gpm/error.hpp"
#include "gpm/geometry.hpp"
#include "gpm/reference.hpp"
#include "gpm/verify.hpp"
#include "oracles.hpp"

using namespace gpm;

namespace {

std::vector<oracle::Pair> pairs_of(const NeighborList& nl) {
  std::vector<oracle::Pair> out;
  for (std::size_t i = 0; i < nl.size(); ++i)
    for (std::size_t k = 0; k < nl.neighbors(i).size(); ++k) out.push_back({i, nl.neighbors(i)[k], nl.distances(i)[k]});
  return out;
}

void require_same_pairs(const ParticleSystem& s) {
  const auto got = pairs_of(build_neighbor_list(s));
  const auto want = oracle::brute_pairs(s.positions(), s.influence_radius());
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) {
    CHECK(got[k].i == want[k].i);
    CHECK(got[k].j == want[k].j);
    CHECK(got[k].r == want[k].r);
  }
}

}  // namespace

TEST_CASE("dilated interval and square measures") {
  const std::vector<double> lo1{0}, hi1{1};
  CHECK(Domain::box(1, lo1, hi1, 0.1).measure_omega_h() == doctest::Approx(1.2).epsilon(1e-15));
  const std::vector<double> lo2{0, 0}, hi2{1, 1};
  const double want = 1 + 4 * 0.1 + std::numbers::pi * 0.01;
  CHECK(Domain::box(2, lo2, hi2, 0.1).measure_omega_h() == doctest::Approx(want).epsilon(1e-15));
  CHECK(want == doctest::Approx(1.43142).epsilon(1e-5));
}

TEST_CASE("measure agrees with the hand formula and Monte Carlo in d = 1, 2, 3") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 2.0);
  for (int d = 1; d <= 3; ++d)
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> lo(d), hi(d), side(d);
      for (int k = 0; k < d; ++k) {
        lo[k] = u(rng) - 1.0;
        side[k] = u(rng);
        hi[k] = lo[k] + side[k];
      }
      const double H = 0.5 * u(rng);
      const Domain dom = Domain::box(d, lo, hi, H);
      CHECK(dom.measure_omega_h() == doctest::Approx(oracle::dilated_box_volume(d, side, H)).epsilon(1e-13));
      const auto mc = oracle::mc_dilated_volume(d, lo, hi, H, 400000, 1000 + rep);
      CHECK(std::abs(mc.value - dom.measure_omega_h()) <= 3 * mc.sigma);
    }
}

TEST_CASE("invalid domains are rejected") {
  const std::vector<double> lo{0, 0}, hi{1, 1};
  CHECK_THROWS_AS(Domain::box(2, lo, hi, 0.0), InvalidArgument);
  CHECK_THROWS_AS(Domain::box(2, lo, hi, -1.0), InvalidArgument);
  CHECK_THROWS_AS(Domain::box(4, lo, hi, 0.1), InvalidArgument);
  const std::vector<double> flat{1, 0};
  CHECK_THROWS_AS(Domain::box(2, lo, flat, 0.1), InvalidArgument);
}

TEST_CASE("region membership") {
  const std::vector<double> lo{0}, hi{1};
  const Domain dom = Domain::box(1, lo, hi, 0.15);
  CHECK(dom.in_omega({0.5, 0, 0}));
  CHECK_FALSE(dom.in_omega({0.0, 0, 0}));
  CHECK(dom.in_gamma_h({0.0, 0, 0}));
  CHECK(dom.in_gamma_h({-0.1, 0, 0}));
  CHECK_FALSE(dom.in_omega_h({-0.15, 0, 0}));
  CHECK_FALSE(dom.in_omega_h({1.2, 0, 0}));
}

TEST_CASE("d = 1 lattice: 12 particles with equal volumes") {
  const std::vector<double> lo{0}, hi{1};
  const ParticleSystem s = generate_lattice(Domain::box(1, lo, hi, 0.15), 0.1);
  REQUIRE(s.size() == 12);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.position(i)[0] == doctest::Approx(-0.05 + 0.1 * static_cast<double>(i)).epsilon(1e-14));
    CHECK(s.volume(i) == doctest::Approx(1.3 / 12).epsilon(1e-14));
  }
  CHECK(s.interior().size() == 10);
  CHECK(s.boundary().size() == 2);
}

TEST_CASE("lattice volumes sum to the dilated measure") {
  for (int d = 1; d <= 3; ++d) {
    const std::vector<double> lo(d, -0.3), hi(d, 0.8);
    const Domain dom = Domain::box(d, lo, hi, 0.23);
    const ParticleSystem s = generate_lattice(dom, 0.09);
    double sum = 0.0;
    for (double v : s.volumes()) sum += v;
    CHECK(std::abs(sum - dom.measure_omega_h()) <= 1e-12 * dom.measure_omega_h());
  }
}

TEST_CASE("lattice too coarse for an interior particle") {
  const std::vector<double> lo{0, 0}, hi{0.1, 0.1};
  CHECK_THROWS_AS(generate_lattice(Domain::box(2, lo, hi, 0.3), 0.3), InvalidArgument);
}

TEST_CASE("perturbation") {
  const std::vector<double> lo{0}, hi{1};
  const ParticleSystem s = generate_lattice(Domain::box(1, lo, hi, 0.15), 0.1);
  const ParticleSystem same = perturb_positions(s, 0.0, 42);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(same.position(i) == s.position(i));

  const ParticleSystem a = perturb_positions(s, 0.03, 42), b = perturb_positions(s, 0.03, 42);
  bool moved = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(a.position(i) == b.position(i));
    moved = moved || a.position(i) != s.position(i);
    CHECK(a.in_omega(i) == s.in_omega(i));
  }
  CHECK(moved);
  CHECK(a.min_pair_distance() > 0.0);
  double min_d = 1e300;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) min_d = std::min(min_d, oracle::dist(a.position(i), a.position(j)));
  CHECK(a.min_pair_distance() == min_d);
}

TEST_CASE("influence radius bounds") {
  const std::vector<double> lo{0}, hi{1};
  const ParticleSystem s = generate_lattice(Domain::box(1, lo, hi, 0.15), 0.1);
  CHECK(set_influence_radius(s, 0.12).influence_radius() == 0.12);
  CHECK_THROWS_AS(set_influence_radius(s, 0.09), InvalidArgument);
  CHECK_THROWS_AS(set_influence_radius(s, 0.15), InvalidArgument);
  try {
    set_influence_radius(s, 0.15);
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("h < H") != std::string::npos);
  }
  CHECK_THROWS_AS(s.influence_radius(), InvalidArgument);
}

TEST_CASE("system validation") {
  const std::vector<double> lo{-0.05}, hi{0.05};
  const Domain dom = Domain::box(1, lo, hi, 0.7);
  CHECK_NOTHROW(ParticleSystem::create(dom, {{0, 0, 0}, {0.3, 0, 0}, {0.7, 0, 0}}, {0.5, 0.5, 0.5}, 0.5));
  // volumes must sum to |Omega_H| = 1.5
  CHECK_THROWS_AS(ParticleSystem::create(dom, {{0, 0, 0}, {0.3, 0, 0}}, {0.5, 0.5}), InvalidArgument);
  // outside Omega_H
  CHECK_THROWS_AS(ParticleSystem::create(dom, {{0, 0, 0}, {0.8, 0, 0}}, {0.75, 0.75}), InvalidArgument);
  // duplicate positions
  CHECK_THROWS_AS(ParticleSystem::create(dom, {{0.3, 0, 0}, {0.3, 0, 0}}, {0.75, 0.75}), InvalidArgument);
  // non-positive volume
  CHECK_THROWS_AS(ParticleSystem::create(dom, {{0, 0, 0}, {0.3, 0, 0}}, {1.5, 0.0}), InvalidArgument);
  const auto r = ParticleSystem::with_rescaled_volumes(dom, {{0, 0, 0}, {0.3, 0, 0}}, {1.0, 2.0});
  CHECK(r.volume(0) == doctest::Approx(0.5));
  CHECK(r.volume(1) == doctest::Approx(1.0));
}

TEST_CASE("neighbour lists: strict support") {
  const NeighborList a = build_neighbor_list(fx::three_particles(0.3, 0.7, 0.5));
  REQUIRE(a.neighbors(0).size() == 1);
  CHECK(a.neighbors(0)[0] == 1);
  CHECK(a.distances(0)[0] == doctest::Approx(0.3));
  CHECK(a.neighbors(1)[0] == 0);

  // x1 - x0 = 0.5 = h is excluded.
  const NeighborList b = build_neighbor_list(fx::three_particles(0.5, 0.7, 0.5));
  CHECK(b.neighbors(0).empty());
  CHECK(b.neighbors(1).size() == 1);
}

TEST_CASE("cell list equals brute force") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // 200 random particles in the unit square's dilation.
  const std::vector<double> lo{0, 0}, hi{1, 1};
  const Domain dom = Domain::box(2, lo, hi, 0.2);
  std::vector<Vec3> x;
  while (x.size() < 200) {
    const Vec3 p{u(rng) * 1.4 - 0.2, u(rng) * 1.4 - 0.2, 0};
    if (dom.in_omega_h(p)) x.push_back(p);
  }
  const auto s = ParticleSystem::with_rescaled_volumes(dom, x, std::vector<double>(x.size(), 1.0), 0.15);
  require_same_pairs(s);
  CHECK(build_neighbor_list(s) == reference::brute_force_neighbors(s));

  for (int d = 1; d <= 3; ++d)
    for (bool perturbed : {false, true}) require_same_pairs(random_system(77 + d, d, perturbed).system());
  require_same_pairs(two_cluster_system(3, 2).system());
}
