#pragma once

#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

namespace gpm {

enum class WeightFamily { polynomial, table };

// Reference weight W: positive on (0,1), zero on [1,inf), unit integral over R^d.
class WeightFunction {
 public:
  // W(r) = C (1-r)^p on [0,1); C from the Beta integral.
  static WeightFunction polynomial(int p, int dim);
  // Piecewise-linear table through (r_k, w_k), normalized numerically. Needs
  // r_0 = 0, strictly increasing r, r_last = 1 and w_k > 0 for r_k < 1. The
  // value at r >= 1 is 0 regardless of the last entry.
  static WeightFunction table(std::vector<double> r, std::vector<double> w, int dim);

  WeightFamily family() const { return family_; }
  int dim() const { return dim_; }
  int exponent() const { return p_; }
  double normalization() const { return norm_; }
  const std::vector<double>& table_r() const { return tr_; }
  const std::vector<double>& table_w() const { return tw_; }

  double operator()(double r) const;

  // w_h(r) = h^-d W(r/h).
  double scaled(double h, double r) const;

 private:
  WeightFunction() = default;

  WeightFamily family_ = WeightFamily::polynomial;
  int dim_ = 1;
  int p_ = 0;
  double norm_ = 1.0;
  std::vector<double> tr_, tw_;
};

// Built-in family constructor; tables go through WeightFunction::table.
WeightFunction make_weight(WeightFamily family, int p, int dim);

// Throws InvalidArgument for h <= 0 or r < 0.
double eval_scaled(const WeightFunction& w, double h, double r);

// Surface area of the unit sphere in R^d.
double unit_sphere_area(int dim);

// Two-column CSV "r,W" (header line optional), interpolated linearly.
WeightFunction load_weight_table(const std::filesystem::path& csv, int dim);

// Root h of 2d * cell_volume * w_h(dx) = 1 inside bounds, by bisection down
// to adjacent doubles. cell_volume defaults to dx^d. bounds must lie in
// (dx, 2dx) for d = 1 and (dx, sqrt(2) dx) otherwise so that only the 2d
// axis neighbours fall inside the support.
double calibrate_lattice_h(const WeightFunction& w, double dx, std::pair<double, double> bounds,
                           std::optional<double> cell_volume = std::nullopt);

}  // namespace gpm
