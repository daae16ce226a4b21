#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gpm/analysis.hpp"
#include "gpm/error.hpp"
#include "gpm/operators.hpp"

namespace gpm {

enum class SolveMethod { cg, dense_direct };

struct SolveOptions {
  SolveMethod method = SolveMethod::cg;
  double cg_rel_tol = 1e-12;
  std::optional<int> cg_max_iter;  // default 10 * N_Omega
  bool require_connectivity = true;
  bool jacobi = false;
};

struct SolveResult {
  ScalarField u;  // in V_h
  int iterations = 0;
  // ||A D y - b||_2 / ||b||_2, absolute when b = 0.
  double residual_norm = 0.0;
  std::vector<double> b;
  std::vector<double> residual_history;
  SolveMethod method = SolveMethod::cg;
};

class ConnectivityError : public Error {
 public:
  explicit ConnectivityError(ConnectivityReport report)
      : Error("particle distribution is not h-connected: " + report.diagnostic, ExitCode::connectivity),
        report_(std::move(report)) {}
  const ConnectivityReport& report() const { return report_; }

 private:
  ConnectivityReport report_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(int iterations, double residual)
      : Error("CG did not converge in " + std::to_string(iterations) + " iterations (relative residual " +
                  std::to_string(residual) + ")",
              ExitCode::no_convergence),
        iterations_(iterations),
        residual_(residual) {}
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  int iterations_;
  double residual_;
};

struct CgResult {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> history;
};

// Conjugate gradients for SPD A from the initial guess in x (usually zero).
// Convergence is confirmed on the true residual b - A x, not only the
// recurrence.
CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b, std::span<double> x,
                            double rel_tol, int max_iter, bool jacobi = false);

// f_hat = f on Lambda(Omega), 0 on Lambda(Gamma_H).
VectorField extend_by_zero(const ParticleSystem& system, const VectorField& f);

// b_i = (div_plus f_hat)_i over the interior renumbering.
std::vector<double> build_rhs(const Discretization& disc, const VectorField& f_hat);

// Find u in V_h with -lap_h u = div_plus f_hat on Lambda(Omega), through
// A z = b, y = D^-1 z. Throws ConnectivityError (guard on), ConvergenceError,
// or InvalidArgument (dense path above kDenseLimit unknowns).
SolveResult solve_poisson(const Discretization& disc, const VectorField& f, const SolveOptions& opts = {});

// ||-lap_h u - div_plus f_hat||_{L2, Omega}.
double residual(const Discretization& disc, const ScalarField& u, const VectorField& f);
// residual() divided by ||div_plus f_hat||_{L2, Omega} (unscaled when that is 0).
double relative_residual(const Discretization& disc, const ScalarField& u, const VectorField& f);

}  // namespace gpm
