#include "gpm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "cell_grid.hpp"
#include "gpm/error.hpp"

namespace gpm {

namespace {

// Volume of the unit k-ball.
double unit_ball_volume(int k) {
  switch (k) {
    case 0: return 1.0;
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    default: return 4.0 / 3.0 * std::numbers::pi;
  }
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Exact minimum pair distance; infinity for fewer than two points.
double min_distance(std::span<const Vec3> pts, int dim) {
  const std::size_t n = pts.size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  Vec3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts)
    for (int k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], p[k]);
      hi[k] = std::max(hi[k], p[k]);
    }
  double extent = 1.0;
  double longest = 0.0;
  for (int k = 0; k < dim; ++k) {
    longest = std::max(longest, hi[k] - lo[k]);
    extent *= std::max(hi[k] - lo[k], 1e-300);
  }
  double cell = std::pow(extent / static_cast<double>(n), 1.0 / dim);
  if (!(cell > 0.0) || !std::isfinite(cell)) cell = longest > 0.0 ? longest : 1.0;

  detail::CellGrid grid(pts, dim, cell);
  double best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : best)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    grid.for_each_near(pts[i], [&](std::uint32_t j) {
      if (j != static_cast<std::uint32_t>(i)) best = std::min(best, norm(pts[j] - pts[i]));
    });
  }
  if (best <= grid.cell_size()) return best;
  // Nearest pair may straddle non-adjacent cells.
  best = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(dynamic, 64) reduction(min : best)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j) best = std::min(best, norm(pts[j] - pts[i]));
  return best;
}

void check_influence_radius(double h, double min_dist, double dilation) {
  if (!(h > 0.0)) throw InvalidArgument("influence radius h must be positive");
  // A single particle has no pairs; the lower bound is vacuous.
  if (std::isfinite(min_dist) && !(min_dist < h))
    throw InvalidArgument("influence radius h=" + fmt_double(h) +
                          " violates min|x_i - x_j| < h (min pair distance " + fmt_double(min_dist) + ")");
  if (!(h < dilation))
    throw InvalidArgument("influence radius h=" + fmt_double(h) + " violates h < H (H=" +
                          fmt_double(dilation) + ")");
}

}  // namespace

Domain Domain::box(int dim, std::span<const double> lower, std::span<const double> upper,
                   double dilation) {
  if (dim < 1 || dim > 3) throw InvalidArgument("dimension must be 1, 2 or 3, got " + std::to_string(dim));
  if (lower.size() != static_cast<std::size_t>(dim) || upper.size() != static_cast<std::size_t>(dim))
    throw InvalidArgument("lower/upper must have exactly d components");
  if (!(dilation > 0.0) || !std::isfinite(dilation)) throw InvalidArgument("dilation H must be positive");
  Domain d;
  d.dim_ = dim;
  for (int k = 0; k < dim; ++k) {
    if (!(upper[k] > lower[k]) || !std::isfinite(upper[k]) || !std::isfinite(lower[k]))
      throw InvalidArgument("degenerate box: upper must exceed lower in every component");
    d.lower_[k] = lower[k];
    d.upper_[k] = upper[k];
  }
  d.dilation_ = dilation;

  // Steiner formula for box (+) H-ball: sum_k e_{d-k}(sides) * kappa_k * H^k,
  // with e_m the elementary symmetric polynomial of the side lengths.
  std::array<double, 4> esym{1.0, 0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) {
    const double side = upper[k] - lower[k];
    for (int m = k + 1; m >= 1; --m) esym[m] += esym[m - 1] * side;
  }
  double measure = 0.0;
  for (int k = 0; k <= dim; ++k) measure += esym[dim - k] * unit_ball_volume(k) * std::pow(dilation, k);
  d.measure_omega_h_ = measure;
  return d;
}

double Domain::measure_omega() const {
  double m = 1.0;
  for (int k = 0; k < dim_; ++k) m *= upper_[k] - lower_[k];
  return m;
}

double Domain::distance_to_omega(const Vec3& x) const {
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) {
    const double gap = std::max({lower_[k] - x[k], 0.0, x[k] - upper_[k]});
    s += gap * gap;
  }
  return std::sqrt(s);
}

bool Domain::in_omega(const Vec3& x) const {
  for (int k = 0; k < dim_; ++k)
    if (!(x[k] > lower_[k] && x[k] < upper_[k])) return false;
  return true;
}

ParticleSystem ParticleSystem::create(Domain domain, std::vector<Vec3> positions,
                                      std::vector<double> volumes,
                                      std::optional<double> influence_radius, double spacing) {
  const std::size_t n = positions.size();
  if (n == 0) throw InvalidArgument("particle system is empty");
  if (volumes.size() != n) throw InvalidArgument("positions and volumes differ in length");
  if (n > std::numeric_limits<std::uint32_t>::max()) throw InvalidArgument("too many particles");

  ParticleSystem s;
  s.domain_ = domain;
  s.in_omega_.resize(n);
  s.interior_rank_.assign(n, -1);
  double vsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& x = positions[i];
    for (int k = domain.dim(); k < 3; ++k) x[k] = 0.0;
    for (int k = 0; k < domain.dim(); ++k)
      if (!std::isfinite(x[k])) throw InvalidArgument("non-finite position at particle " + std::to_string(i));
    if (!domain.in_omega_h(x)) throw InvalidArgument("particle " + std::to_string(i) + " lies outside Omega_H");
    if (!(volumes[i] > 0.0) || !std::isfinite(volumes[i]))
      throw InvalidArgument("particle volume must be positive (particle " + std::to_string(i) + ")");
    vsum += volumes[i];
    if (domain.in_omega(x)) {
      s.in_omega_[i] = 1;
      s.interior_rank_[i] = static_cast<std::int64_t>(s.interior_.size());
      s.interior_.push_back(static_cast<std::uint32_t>(i));
    } else {
      s.boundary_.push_back(static_cast<std::uint32_t>(i));
    }
  }
  const double target = domain.measure_omega_h();
  if (std::abs(vsum - target) > 1e-12 * target)
    throw InvalidArgument("volumes sum to " + fmt_double(vsum) + " but |Omega_H| = " + fmt_double(target));

  s.min_pair_distance_ = min_distance(positions, domain.dim());
  if (!(s.min_pair_distance_ > 0.0)) throw InvalidArgument("particle positions are not pairwise distinct");
  if (influence_radius) check_influence_radius(*influence_radius, s.min_pair_distance_, domain.dilation());
  s.influence_radius_ = influence_radius;
  s.spacing_ = spacing;
  s.positions_ = std::move(positions);
  s.volumes_ = std::move(volumes);
  return s;
}

ParticleSystem ParticleSystem::with_rescaled_volumes(Domain domain, std::vector<Vec3> positions,
                                                     std::vector<double> volumes,
                                                     std::optional<double> influence_radius,
                                                     double spacing) {
  double sum = 0.0;
  for (double v : volumes) sum += v;
  if (!(sum > 0.0)) throw InvalidArgument("volumes must be positive");
  const double scale = domain.measure_omega_h() / sum;
  for (double& v : volumes) v *= scale;
  return create(domain, std::move(positions), std::move(volumes), influence_radius, spacing);
}

double ParticleSystem::influence_radius() const {
  if (!influence_radius_) throw InvalidArgument("influence radius has not been set");
  return *influence_radius_;
}

NeighborList::NeighborList(std::vector<std::size_t> offsets, std::vector<std::uint32_t> indices,
                           std::vector<double> distances)
    : offsets_(std::move(offsets)), indices_(std::move(indices)), distances_(std::move(distances)) {
  if (offsets_.empty() || offsets_.back() != indices_.size() || indices_.size() != distances_.size())
    throw InvalidArgument("inconsistent neighbor list layout");
}

Domain make_box_domain(int dim, std::span<const double> lower, std::span<const double> upper,
                       double dilation) {
  return Domain::box(dim, lower, upper, dilation);
}

ParticleSystem generate_lattice(const Domain& domain, double spacing) {
  if (!(spacing > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  if (!(spacing < domain.dilation())) throw InvalidArgument("lattice spacing must be smaller than H");
  const int d = domain.dim();
  const double H = domain.dilation();

  // Per axis: first lattice coordinate and index range covering [lower-H, upper+H].
  std::array<double, 3> first{0, 0, 0};
  std::array<std::int64_t, 3> jmin{0, 0, 0}, jmax{0, 0, 0};
  for (int k = 0; k < d; ++k) {
    const double len = domain.upper()[k] - domain.lower()[k];
    const double cells = len / spacing;
    const double rounded = std::round(cells);
    const double whole = std::abs(cells - rounded) < 1e-9 * std::max(1.0, cells) ? rounded : std::floor(cells);
    const double pad = 0.5 * (len - whole * spacing);
    first[k] = domain.lower()[k] + pad + 0.5 * spacing;
    jmin[k] = static_cast<std::int64_t>(std::floor((domain.lower()[k] - H - first[k]) / spacing)) - 1;
    jmax[k] = static_cast<std::int64_t>(std::ceil((domain.upper()[k] + H - first[k]) / spacing)) + 1;
  }

  std::vector<Vec3> positions;
  for (std::int64_t jz = jmin[2]; jz <= jmax[2]; ++jz)
    for (std::int64_t jy = jmin[1]; jy <= jmax[1]; ++jy)
      for (std::int64_t jx = jmin[0]; jx <= jmax[0]; ++jx) {
        const std::array<std::int64_t, 3> j{jx, jy, jz};
        Vec3 x{0, 0, 0};
        for (int k = 0; k < d; ++k) x[k] = first[k] + static_cast<double>(j[k]) * spacing;
        if (domain.in_omega_h(x)) positions.push_back(x);
      }

  const bool any_interior =
      std::any_of(positions.begin(), positions.end(), [&](const Vec3& x) { return domain.in_omega(x); });
  if (!any_interior) throw InvalidArgument("lattice spacing too coarse: no particle falls inside Omega");

  std::vector<double> volumes(positions.size(), std::pow(spacing, d));
  return ParticleSystem::with_rescaled_volumes(domain, std::move(positions), std::move(volumes), std::nullopt,
                                               spacing);
}

ParticleSystem perturb_positions(const ParticleSystem& system, double magnitude, std::uint64_t seed) {
  const double limit = system.spacing() > 0.0 ? 0.5 * system.spacing() : 0.5 * system.min_pair_distance();
  if (!(magnitude >= 0.0) || !(magnitude < limit))
    throw InvalidArgument("perturbation magnitude must lie in [0, spacing/2)");
  const Domain& domain = system.domain();
  const int d = system.dim();
  std::vector<Vec3> positions(system.positions().begin(), system.positions().end());
  if (magnitude > 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> shift(-magnitude, magnitude);
    for (std::size_t i = 0; i < positions.size(); ++i) {
      Vec3 trial = positions[i];
      for (int k = 0; k < d; ++k) trial[k] += shift(rng);
      if (domain.in_omega_h(trial) && domain.in_omega(trial) == system.in_omega(i)) positions[i] = trial;
    }
  }
  std::vector<double> volumes(system.volumes().begin(), system.volumes().end());
  std::optional<double> h;
  if (system.has_influence_radius()) h = system.influence_radius();
  return ParticleSystem::create(domain, std::move(positions), std::move(volumes), h, system.spacing());
}

ParticleSystem set_influence_radius(const ParticleSystem& system, double h) {
  check_influence_radius(h, system.min_pair_distance(), system.domain().dilation());
  ParticleSystem out = system;
  // Only the radius changes; the remaining invariants were checked at creation.
  return ParticleSystem::create(system.domain(), {out.positions().begin(), out.positions().end()},
                                {out.volumes().begin(), out.volumes().end()}, h, system.spacing());
}

NeighborList build_neighbor_list(const ParticleSystem& system) {
  const double h = system.influence_radius();
  const auto pts = system.positions();
  const std::size_t n = pts.size();
  detail::CellGrid grid(pts, system.dim(), h);

  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows(n);
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    auto& row = rows[static_cast<std::size_t>(i)];
    grid.for_each_near(pts[i], [&](std::uint32_t j) {
      if (j == static_cast<std::uint32_t>(i)) return;
      const double r = norm(pts[j] - pts[i]);
      if (r < h) row.emplace_back(j, r);
    });
    std::sort(row.begin(), row.end());
  }

  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + rows[i].size();
  std::vector<std::uint32_t> indices(offsets[n]);
  std::vector<double> distances(offsets[n]);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    std::size_t at = offsets[static_cast<std::size_t>(i)];
    for (const auto& [j, r] : rows[static_cast<std::size_t>(i)]) {
      indices[at] = j;
      distances[at] = r;
      ++at;
    }
  }
  return NeighborList(std::move(offsets), std::move(indices), std::move(distances));
}

}  // namespace gpm
