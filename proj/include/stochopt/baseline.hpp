#pragma once

#include <cstddef>

#include "stochopt/linalg.hpp"
#include "stochopt/problems.hpp"
#include "stochopt/trace.hpp"

namespace stochopt {

/// One deterministic prox-linear subproblem in the displacement z = x - x_k:
///   minimize (1/n) ||C z + r||_1 + (1 / (2 alpha)) ||z||^2
/// with rows C_i = 2 <a_i, x_k> a_i^T and r_i = <a_i, x_k>^2 - b_i.
struct QPSubproblem {
  Matrix C;
  Vector r;
  Vector center;
  double alpha = 1.0;

  static QPSubproblem linearize(const PhaseRetrievalInstance& inst, const Vector& x, double alpha);
  void validate() const;
  double objective(const Vector& z) const;
};

struct AdmmConfig {
  double rho = 1.0;
  double tol_primal = 1e-8;
  double tol_dual = 1e-8;
  std::size_t max_iter = 10000;

  void validate() const;
};

struct AdmmResult {
  Vector z;
  std::size_t iters = 0;
  bool converged = false;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

// Scaled-form ADMM on the splitting u = C z + r. The d x d system
// (rho C^T C + I / alpha) is Cholesky-factorized once per call.
AdmmResult solve_subproblem(const QPSubproblem& sub, const AdmmConfig& cfg = {});

// Same iteration, refactorizing the normal matrix at every step. Only used
// to check that factor reuse does not change results.
AdmmResult solve_subproblem_refactorizing(const QPSubproblem& sub, const AdmmConfig& cfg = {});

// Largest alpha for which every prox-linear step provably does not increase
// the objective: f(x + z) - model(z) <= (1/n) ||A z||^2, so alpha =
// n / (2 ||A||_2^2) makes the proximal term dominate the linearization error.
double descent_stepsize(const PhaseRetrievalInstance& inst);

/// Deterministic prox-linear method: x_{k+1} = x_k + z_k with z_k from
/// solve_subproblem. Checkpoint k holds objective(x_k) and ||z_k|| / alpha.
RunTrace prox_linear_outer(const PhaseRetrievalInstance& inst, const Vector& x0, double alpha,
                           std::size_t iters, const AdmmConfig& cfg = {});

}  // namespace stochopt
