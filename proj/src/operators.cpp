#include "gpm/operators.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "gpm/error.hpp"

namespace gpm {

namespace {

template <class Field>
void check_size(const Discretization& disc, const Field& f) {
  if (f.size() != disc.size())
    throw InvalidArgument("field has " + std::to_string(f.size()) + " values for " +
                          std::to_string(disc.size()) + " particles");
}

}  // namespace

bool vanishes_on_gamma_h(const ParticleSystem& system, const ScalarField& f) {
  return std::all_of(system.boundary().begin(), system.boundary().end(),
                     [&](std::uint32_t i) { return f.values.at(i) == 0.0; });
}

bool vanishes_on_gamma_h(const ParticleSystem& system, const VectorField& f) {
  return std::all_of(system.boundary().begin(), system.boundary().end(), [&](std::uint32_t i) {
    const auto& v = f.values.at(i);
    return v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0;
  });
}

ScalarField project_to_vh(const ParticleSystem& system, ScalarField f) {
  if (f.size() != system.size()) throw InvalidArgument("field/system size mismatch");
  for (auto i : system.boundary()) f.values[i] = 0.0;
  f.in_vh = true;
  return f;
}

VectorField project_to_vh(const ParticleSystem& system, VectorField f) {
  if (f.size() != system.size()) throw InvalidArgument("field/system size mismatch");
  for (auto i : system.boundary()) f.values[i] = Vec3{0, 0, 0};
  f.in_vh = true;
  return f;
}

Discretization::Discretization(ParticleSystem system, WeightFunction weight)
    : system_(std::move(system)), weight_(std::move(weight)) {
  if (weight_.dim() != system_.dim()) throw InvalidArgument("weight and particle system dimensions differ");
  h_ = system_.influence_radius();
  neighbors_ = build_neighbor_list(system_);
  weights_.resize(neighbors_.directed_pair_count());
  const auto n = static_cast<std::ptrdiff_t>(system_.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto r = neighbors_.distances(static_cast<std::size_t>(i));
    const std::size_t base = neighbors_.begin_of(static_cast<std::size_t>(i));
    for (std::size_t k = 0; k < r.size(); ++k) weights_[base + k] = weight_.scaled(h_, r[k]);
  }
}

ScalarField apply_div_plus(const Discretization& disc, const VectorField& psi) {
  check_size(disc, psi);
  const auto& sys = disc.system();
  const auto& nl = disc.neighbors();
  const double d = disc.dim();
  ScalarField out = ScalarField::zeros(disc.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(disc.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto nbr = nl.neighbors(i);
    const auto r = nl.distances(i);
    const auto w = disc.pair_weights(i);
    const Vec3& xi = sys.position(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      const std::size_t j = nbr[k];
      acc += sys.volume(j) * (dot(psi[j] + psi[i], sys.position(j) - xi) / (r[k] * r[k])) * w[k];
    }
    out[i] = d * acc;
  }
  return out;
}

VectorField apply_grad(const Discretization& disc, const ScalarField& phi) {
  check_size(disc, phi);
  const auto& sys = disc.system();
  const auto& nl = disc.neighbors();
  const double d = disc.dim();
  VectorField out = VectorField::zeros(disc.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(disc.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto nbr = nl.neighbors(i);
    const auto r = nl.distances(i);
    const auto w = disc.pair_weights(i);
    const Vec3& xi = sys.position(i);
    Vec3 acc{0, 0, 0};
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      const std::size_t j = nbr[k];
      const double s = sys.volume(j) * ((phi[j] - phi[i]) / r[k]) * w[k] / r[k];
      acc += s * (sys.position(j) - xi);
    }
    out[i] = d * acc;
  }
  return out;
}

ScalarField apply_lap(const Discretization& disc, const ScalarField& phi, LaplacianVolume volume) {
  check_size(disc, phi);
  const auto& sys = disc.system();
  const auto& nl = disc.neighbors();
  const double two_d = 2.0 * disc.dim();
  const bool self = volume == LaplacianVolume::self;
  ScalarField out = ScalarField::zeros(disc.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(disc.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto nbr = nl.neighbors(i);
    const auto r = nl.distances(i);
    const auto w = disc.pair_weights(i);
    double acc = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      const std::size_t j = nbr[k];
      acc += sys.volume(self ? i : j) * ((phi[j] - phi[i]) / (r[k] * r[k])) * w[k];
    }
    out[i] = two_d * acc;
  }
  return out;
}

InteractionCoefficients interaction_coefficients(const Discretization& disc) {
  const auto& sys = disc.system();
  const auto& nl = disc.neighbors();
  const double d = disc.dim();
  InteractionCoefficients c;
  const std::size_t m = nl.directed_pair_count();
  c.beta.resize(m);
  c.gamma.resize(m);
  c.grad.resize(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(disc.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto nbr = nl.neighbors(i);
    const auto r = nl.distances(i);
    const auto w = disc.pair_weights(i);
    const std::size_t base = nl.begin_of(i);
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      const double wr2 = w[k] / (r[k] * r[k]);
      c.gamma[base + k] = d * wr2;
      c.beta[base + k] = 2.0 * d * wr2;
      c.grad[base + k] = (d * wr2) * (sys.position(nbr[k]) - sys.position(i));
    }
  }
  return c;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != cols || y.size() != rows) throw InvalidArgument("mat-vec dimension mismatch");
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(rows); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double acc = 0.0;
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
    y[i] = acc;
  }
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto first = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i]);
  const auto last = col.begin() + static_cast<std::ptrdiff_t>(row_ptr[i + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
  return it != last && *it == j ? val[static_cast<std::size_t>(it - col.begin())] : 0.0;
}

DenseMatrix to_dense(const CsrMatrix& m) {
  if (m.rows > kDenseLimit || m.cols > kDenseLimit)
    throw InvalidArgument("dense export refused above " + std::to_string(kDenseLimit) + " rows");
  if (m.rows != m.cols) throw InvalidArgument("dense export expects a square matrix");
  DenseMatrix d{m.rows, std::vector<double>(m.rows * m.rows, 0.0)};
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k) d(i, m.col[k]) = m.val[k];
  return d;
}

AssembledSystem assemble(const Discretization& disc) {
  const auto& sys = disc.system();
  const auto& nl = disc.neighbors();
  const double two_d = 2.0 * disc.dim();
  AssembledSystem out;
  out.interior.assign(sys.interior().begin(), sys.interior().end());
  const std::size_t n = out.interior.size();
  out.D.resize(n);
  out.A.rows = out.A.cols = n;

  std::vector<std::size_t> count(n + 1, 0);
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t c = 1;
    for (auto j : nl.neighbors(out.interior[a])) c += sys.in_omega(j) ? 1 : 0;
    count[a + 1] = count[a] + c;
  }
  out.A.row_ptr = count;
  out.A.col.resize(count[n]);
  out.A.val.resize(count[n]);

  bool degenerate = false;
#pragma omp parallel for schedule(static) reduction(|| : degenerate)
  for (std::ptrdiff_t aa = 0; aa < static_cast<std::ptrdiff_t>(n); ++aa) {
    const auto a = static_cast<std::size_t>(aa);
    const std::size_t i = out.interior[a];
    const double vi = sys.volume(i);
    out.D[a] = vi;
    const auto nbr = nl.neighbors(i);
    const auto r = nl.distances(i);
    const auto w = disc.pair_weights(i);
    double diag = 0.0;
    std::size_t at = out.A.row_ptr[a];
    bool diag_placed = false;
    std::size_t diag_slot = 0;
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      const std::size_t j = nbr[k];
      const double beta = two_d * w[k] / (r[k] * r[k]);
      diag += (sys.volume(j) / vi) * beta;
      if (!sys.in_omega(j)) continue;
      if (!diag_placed && j > i) {
        diag_slot = at++;
        diag_placed = true;
      }
      out.A.col[at] = static_cast<std::uint32_t>(sys.interior_rank(j));
      out.A.val[at] = -beta;
      ++at;
    }
    if (!diag_placed) diag_slot = at++;
    out.A.col[diag_slot] = static_cast<std::uint32_t>(a);
    out.A.val[diag_slot] = diag;
    degenerate = degenerate || diag == 0.0;
  }
  out.degenerate = degenerate;
  return out;
}

void write_matrix_market(std::ostream& out, const CsrMatrix& m) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << m.rows << ' ' << m.cols << ' ' << m.nnz() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t k = m.row_ptr[i]; k < m.row_ptr[i + 1]; ++k)
      out << i + 1 << ' ' << m.col[k] + 1 << ' ' << m.val[k] << '\n';
}

}  // namespace gpm
