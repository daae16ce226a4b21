#include "gpm/solver.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "gpm/parallel.hpp"

namespace gpm {

namespace {

double dot_product(std::span<const double> a, std::span<const double> b) {
  return reduce_sum(static_cast<std::ptrdiff_t>(a.size()),
                    [&](std::ptrdiff_t i) { return a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)]; });
}

double euclid(std::span<const double> a) { return std::sqrt(dot_product(a, a)); }

std::vector<double> true_residual(const CsrMatrix& a, std::span<const double> b, std::span<const double> x) {
  std::vector<double> r(b.size());
  a.multiply(x, r);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(r.size()); ++i)
    r[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(i)];
  return r;
}

std::vector<double> diagonal(const CsrMatrix& a) {
  std::vector<double> d(a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) d[i] = a.at(i, i);
  return d;
}

}  // namespace

CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                            double rel_tol, int max_iter, bool jacobi) {
  const std::size_t n = b.size();
  if (a.rows != n || a.cols != n || x.size() != n) throw InvalidArgument("CG dimension mismatch");
  if (!(rel_tol > 0.0) || max_iter < 1) throw InvalidArgument("CG needs a positive tolerance and max_iter >= 1");

  CgResult res;
  const double bnorm = euclid(b);
  const double scale = bnorm > 0.0 ? bnorm : 1.0;
  std::vector<double> inv_diag;
  if (jacobi) {
    inv_diag = diagonal(a);
    for (double& v : inv_diag) v = v != 0.0 ? 1.0 / v : 1.0;
  }
  auto precondition = [&](const std::vector<double>& r, std::vector<double>& z) {
    if (!jacobi) {
      z = r;
      return;
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      z[static_cast<std::size_t>(i)] = inv_diag[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(i)];
  };

  std::vector<double> r = true_residual(a, b, x);
  std::vector<double> z(n), p(n), ap(n);
  double rnorm = euclid(r);
  res.history.push_back(rnorm / scale);
  if (rnorm / scale <= rel_tol) {
    res.converged = true;
    res.relative_residual = rnorm / scale;
    return res;
  }
  precondition(r, z);
  p = z;
  double rz = dot_product(r, z);

  while (res.iterations < max_iter) {
    a.multiply(p, ap);
    const double pap = dot_product(p, ap);
    if (!(pap > 0.0)) break;  // breakdown: A not positive definite along p
    const double alpha = rz / pap;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    ++res.iterations;
    rnorm = euclid(r);
    res.history.push_back(rnorm / scale);
    if (rnorm / scale <= rel_tol) {
      r = true_residual(a, b, x);
      rnorm = euclid(r);
      if (rnorm / scale <= rel_tol) {
        res.converged = true;
        break;
      }
      // Recurrence drifted; restart from the true residual.
      precondition(r, z);
      p = z;
      rz = dot_product(r, z);
      continue;
    }
    precondition(r, z);
    const double rz_next = dot_product(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      p[i] = z[i] + beta * p[i];
    }
  }
  res.relative_residual = euclid(true_residual(a, b, x)) / scale;
  res.converged = res.converged || res.relative_residual <= rel_tol;
  return res;
}

VectorField extend_by_zero(const ParticleSystem& system, const VectorField& f) {
  return project_to_vh(system, f);
}

std::vector<double> build_rhs(const Discretization& disc, const VectorField& f_hat) {
  if (!vanishes_on_gamma_h(disc.system(), f_hat)) throw InvalidArgument("right-hand side field must lie in V_h^d");
  const ScalarField div = apply_div_plus(disc, f_hat);
  const auto interior = disc.system().interior();
  std::vector<double> b(interior.size());
  for (std::size_t a = 0; a < interior.size(); ++a) b[a] = div[interior[a]];
  return b;
}

SolveResult solve_poisson(const Discretization& disc, const VectorField& f, const SolveOptions& opts) {
  const auto& sys = disc.system();
  if (f.size() != sys.size()) throw InvalidArgument("source field/system size mismatch");
  const std::size_t n_omega = sys.interior().size();
  if (opts.method == SolveMethod::dense_direct && n_omega > kDenseLimit)
    throw InvalidArgument("dense direct solve refused for N_Omega = " + std::to_string(n_omega) + " > " +
                          std::to_string(kDenseLimit));

  std::optional<ConnectivityReport> conn;
  if (opts.require_connectivity || opts.method == SolveMethod::dense_direct) {
    conn = check_h_connectivity(sys, disc.neighbors(), 0);
    if (opts.require_connectivity && !conn->connected) throw ConnectivityError(std::move(*conn));
  }

  SolveResult out;
  out.method = opts.method;
  const VectorField f_hat = extend_by_zero(sys, f);
  out.b = build_rhs(disc, f_hat);
  const AssembledSystem as = assemble(disc);

  std::vector<double> z(n_omega, 0.0);
  if (opts.method == SolveMethod::cg) {
    const int max_iter = opts.cg_max_iter.value_or(std::max<int>(1, 10 * static_cast<int>(n_omega)));
    CgResult cg = conjugate_gradient(as.A, out.b, z, opts.cg_rel_tol, max_iter, opts.jacobi);
    out.iterations = cg.iterations;
    out.residual_history = std::move(cg.history);
    if (!cg.converged) throw ConvergenceError(cg.iterations, cg.relative_residual);
  } else {
    // A D as a general matrix; y directly.
    const Eigen::Index n = static_cast<Eigen::Index>(n_omega);
    Eigen::MatrixXd ad = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < n_omega; ++i)
      for (std::size_t k = as.A.row_ptr[i]; k < as.A.row_ptr[i + 1]; ++k)
        ad(static_cast<Eigen::Index>(i), as.A.col[k]) = as.A.val[k] * as.D[as.A.col[k]];
    const Eigen::Map<const Eigen::VectorXd> rhs(out.b.data(), n);
    Eigen::VectorXd y;
    if (conn && !conn->connected) y = ad.completeOrthogonalDecomposition().solve(rhs);
    else y = ad.partialPivLu().solve(rhs);
    for (std::size_t i = 0; i < n_omega; ++i) z[i] = as.D[i] * y(static_cast<Eigen::Index>(i));
  }

  out.u = ScalarField::zeros(sys.size());
  for (std::size_t a = 0; a < n_omega; ++a) out.u[as.interior[a]] = z[a] / as.D[a];
  out.u.in_vh = true;

  const double bnorm = euclid(out.b);
  const double rnorm = euclid(true_residual(as.A, out.b, z));
  out.residual_norm = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (out.residual_history.empty()) out.residual_history.push_back(out.residual_norm);
  return out;
}

double residual(const Discretization& disc, const ScalarField& u, const VectorField& f) {
  const auto& sys = disc.system();
  if (!vanishes_on_gamma_h(sys, u)) throw InvalidArgument("solution must lie in V_h");
  const ScalarField lap = apply_lap(disc, u);
  const ScalarField div = apply_div_plus(disc, extend_by_zero(sys, f));
  ScalarField r = ScalarField::zeros(sys.size());
  for (auto i : sys.interior()) r[i] = -lap[i] - div[i];
  return norm_l2(sys, r, Region::omega);
}

double relative_residual(const Discretization& disc, const ScalarField& u, const VectorField& f) {
  const auto& sys = disc.system();
  const double div_norm = norm_l2(sys, apply_div_plus(disc, extend_by_zero(sys, f)), Region::omega);
  const double r = residual(disc, u, f);
  return div_norm > 0.0 ? r / div_norm : r;
}

}  // namespace gpm
