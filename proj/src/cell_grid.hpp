#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gpm/vec.hpp"

namespace gpm::detail {

// Uniform binning of points into cubic cells of edge >= min_cell. Cells list
// their particles in ascending index order.
class CellGrid {
 public:
  CellGrid(std::span<const Vec3> points, int dim, double min_cell) : dim_(dim) {
    const std::size_t n = points.size();
    Vec3 lo{0, 0, 0}, hi{0, 0, 0};
    if (n > 0) {
      lo = hi = points[0];
      for (const auto& p : points)
        for (int k = 0; k < dim; ++k) {
          lo[k] = std::min(lo[k], p[k]);
          hi[k] = std::max(hi[k], p[k]);
        }
    }
    origin_ = lo;
    // Grow the cell so the grid stays O(N) in size.
    const double cap = std::max<double>(64.0, 4.0 * static_cast<double>(n));
    cell_ = min_cell;
    for (;;) {
      double total = 1.0;
      for (int k = 0; k < 3; ++k) {
        dims_[k] = k < dim ? static_cast<std::int64_t>(std::floor((hi[k] - lo[k]) / cell_)) + 1 : 1;
        total *= static_cast<double>(dims_[k]);
      }
      if (total <= cap) break;
      cell_ *= 1.5;
    }
    const std::size_t ncell = static_cast<std::size_t>(dims_[0] * dims_[1] * dims_[2]);
    start_.assign(ncell + 1, 0);
    cell_of_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      cell_of_[i] = flat(coords(points[i]));
      ++start_[cell_of_[i] + 1];
    }
    for (std::size_t c = 0; c < ncell; ++c) start_[c + 1] += start_[c];
    members_.resize(n);
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) members_[fill[cell_of_[i]]++] = static_cast<std::uint32_t>(i);
  }

  double cell_size() const { return cell_; }

  std::array<std::int64_t, 3> coords(const Vec3& p) const {
    std::array<std::int64_t, 3> c{0, 0, 0};
    for (int k = 0; k < dim_; ++k)
      c[k] = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((p[k] - origin_[k]) / cell_)),
                                      0, dims_[k] - 1);
    return c;
  }

  // Calls visit(j) for every particle in the 3^d block of cells around p.
  template <class Visit>
  void for_each_near(const Vec3& p, Visit&& visit) const {
    const auto c = coords(p);
    const std::int64_t rz = dim_ > 2 ? 1 : 0, ry = dim_ > 1 ? 1 : 0;
    for (std::int64_t dz = -rz; dz <= rz; ++dz)
      for (std::int64_t dy = -ry; dy <= ry; ++dy)
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
          const std::array<std::int64_t, 3> q{c[0] + dx, c[1] + dy, c[2] + dz};
          bool inside = true;
          for (int k = 0; k < 3; ++k) inside = inside && q[k] >= 0 && q[k] < dims_[k];
          if (!inside) continue;
          const std::size_t f = flat(q);
          for (std::size_t m = start_[f]; m < start_[f + 1]; ++m) visit(members_[m]);
        }
  }

 private:
  std::size_t flat(const std::array<std::int64_t, 3>& c) const {
    return static_cast<std::size_t>(c[0] + dims_[0] * (c[1] + dims_[1] * c[2]));
  }

  int dim_;
  Vec3 origin_{};
  double cell_ = 1.0;
  std::array<std::int64_t, 3> dims_{1, 1, 1};
  std::vector<std::size_t> start_;
  std::vector<std::size_t> cell_of_;
  std::vector<std::uint32_t> members_;
};

}  // namespace gpm::detail
