#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gpm {

// When on (default), floating-point reductions are evaluated in index order
// so results do not depend on the thread count.
void set_deterministic(bool on) noexcept;
bool deterministic() noexcept;

// Sum of term(i) for i in [0, n).
template <class Term>
double reduce_sum(std::ptrdiff_t n, Term&& term) {
  if (n <= 0) return 0.0;
  if (deterministic()) {
    std::vector<double> parts(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) parts[static_cast<std::size_t>(i)] = term(i);
    double s = 0.0;
    for (double p : parts) s += p;
    return s;
  }
  double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (std::ptrdiff_t i = 0; i < n; ++i) s += term(i);
  return s;
}

}  // namespace gpm
