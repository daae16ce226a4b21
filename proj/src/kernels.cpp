#include "gpm/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "gpm/error.hpp"

namespace gpm {

namespace {

void check_dim(int dim) {
  if (dim < 1 || dim > 3) throw InvalidArgument("weight dimension must be 1, 2 or 3");
}

// int_0^1 (1-r)^p r^(d-1) dr = (d-1)! p! / (p+d)!
double beta_moment(int p, int dim) {
  double v = 1.0;
  for (int k = 1; k <= dim; ++k) v *= static_cast<double>(k) / static_cast<double>(p + k);
  return v / static_cast<double>(dim);
}

}  // namespace

double unit_sphere_area(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
    default: throw InvalidArgument("dimension must be 1, 2 or 3");
  }
}

WeightFunction WeightFunction::polynomial(int p, int dim) {
  if (p < 1) throw InvalidArgument("polynomial weight exponent p must be >= 1");
  check_dim(dim);
  WeightFunction w;
  w.family_ = WeightFamily::polynomial;
  w.dim_ = dim;
  w.p_ = p;
  w.norm_ = 1.0 / (unit_sphere_area(dim) * beta_moment(p, dim));
  return w;
}

WeightFunction WeightFunction::table(std::vector<double> r, std::vector<double> w, int dim) {
  check_dim(dim);
  if (r.size() != w.size() || r.size() < 2) throw InvalidArgument("weight table needs >= 2 (r, W) rows");
  if (r.front() != 0.0 || r.back() != 1.0) throw InvalidArgument("weight table must span r = 0 .. 1");
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    if (!(r[k + 1] > r[k])) throw InvalidArgument("weight table r must be strictly increasing");
    if (!(w[k] > 0.0) || !std::isfinite(w[k])) throw InvalidArgument("weight table values must be positive for r < 1");
  }
  if (!(w.back() >= 0.0)) throw InvalidArgument("weight table value at r = 1 must be non-negative");

  // sigma_d int_0^1 W(r) r^(d-1) dr; 3-point Gauss-Legendre is exact on each
  // linear segment times r^(d-1), d <= 3.
  static constexpr std::array<double, 3> nodes{-0.7745966692414834, 0.0, 0.7745966692414834};
  static constexpr std::array<double, 3> weights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < r.size(); ++k) {
    const double a = r[k], b = r[k + 1], half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int q = 0; q < 3; ++q) {
      const double x = mid + half * nodes[q];
      const double t = (x - a) / (b - a);
      const double wx = w[k] + t * (w[k + 1] - w[k]);
      integral += half * weights[q] * wx * std::pow(x, dim - 1);
    }
  }
  integral *= unit_sphere_area(dim);

  WeightFunction out;
  out.family_ = WeightFamily::table;
  out.dim_ = dim;
  out.norm_ = 1.0 / integral;
  out.tr_ = std::move(r);
  out.tw_ = std::move(w);
  return out;
}

WeightFunction make_weight(WeightFamily family, int p, int dim) {
  if (family != WeightFamily::polynomial) throw InvalidArgument("tabulated weights need (r, W) data");
  return WeightFunction::polynomial(p, dim);
}

double WeightFunction::operator()(double r) const {
  if (r >= 1.0) return 0.0;
  if (r < 0.0) throw InvalidArgument("weight evaluated at negative r");
  if (family_ == WeightFamily::polynomial) return norm_ * std::pow(1.0 - r, p_);
  const auto it = std::upper_bound(tr_.begin(), tr_.end(), r);
  const std::size_t k = static_cast<std::size_t>(it - tr_.begin()) - 1;
  const double t = (r - tr_[k]) / (tr_[k + 1] - tr_[k]);
  return norm_ * (tw_[k] + t * (tw_[k + 1] - tw_[k]));
}

double WeightFunction::scaled(double h, double r) const {
  return (*this)(r / h) / std::pow(h, dim_);
}

double eval_scaled(const WeightFunction& w, double h, double r) {
  if (!(h > 0.0)) throw InvalidArgument("influence radius must be positive");
  if (!(r >= 0.0)) throw InvalidArgument("distance must be non-negative");
  return w.scaled(h, r);
}

WeightFunction load_weight_table(const std::filesystem::path& csv, int dim) {
  std::ifstream in(csv);
  if (!in) throw InvalidArgument("cannot open weight table " + csv.string());
  std::vector<double> r, w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0, b = 0;
    if (!(row >> a >> b)) {
      if (r.empty()) continue;  // header
      throw InvalidArgument("malformed weight table row: " + line);
    }
    r.push_back(a);
    w.push_back(b);
  }
  return WeightFunction::table(std::move(r), std::move(w), dim);
}

double calibrate_lattice_h(const WeightFunction& w, double dx, std::pair<double, double> bounds,
                           std::optional<double> cell_volume) {
  const int d = w.dim();
  if (!(dx > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  const double ceiling = d == 1 ? 2.0 * dx : std::sqrt(2.0) * dx;
  auto [lo, hi] = bounds;
  if (!(lo > dx) || !(hi < ceiling) || !(lo < hi))
    throw InvalidArgument("calibration bounds must satisfy dx < lo < hi < " + std::string(d == 1 ? "2dx" : "sqrt(2)dx"));
  const double vol = cell_volume.value_or(std::pow(dx, d));
  auto g = [&](double h) { return 2.0 * d * vol * w.scaled(h, dx) - 1.0; };
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo < 0.0) == (ghi < 0.0))
    throw InvalidArgument("no calibration root in bounds: 2d*V*w_h(dx) - 1 does not change sign");
  // Bisect down to adjacent doubles.
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
}

}  // namespace gpm
