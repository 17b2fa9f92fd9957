#include "stochopt/baseline.hpp"

#include <cmath>
#include <limits>

#include "stochopt/errors.hpp"

namespace stochopt {
namespace {

Vector soft_threshold(const Vector& v, double level) {
  return v.unaryExpr([level](double t) {
    if (t > level) return t - level;
    if (t < -level) return t + level;
    return 0.0;
  });
}

double objective_from(const QPSubproblem& sub, const Vector& cz_plus_r, const Vector& z) {
  return cz_plus_r.lpNorm<1>() / static_cast<double>(sub.r.size()) +
         z.squaredNorm() / (2.0 * sub.alpha);
}

AdmmResult run_admm(const QPSubproblem& sub, const AdmmConfig& cfg, bool refactorize) {
  sub.validate();
  cfg.validate();
  const Eigen::Index n = sub.C.rows();
  const Eigen::Index d = sub.C.cols();
  const double threshold = 1.0 / (static_cast<double>(n) * cfg.rho);

  auto factorize = [&] {
    Eigen::MatrixXd normal = cfg.rho * (sub.C.transpose() * sub.C);
    normal.diagonal().array() += 1.0 / sub.alpha;
    Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("ADMM: Cholesky factorization failed");
    return llt;
  };
  Eigen::LLT<Eigen::MatrixXd> llt = factorize();

  AdmmResult result;
  result.z = Vector::Zero(d);
  Vector u = sub.r;
  Vector w = Vector::Zero(n);
  Vector best_z = result.z;
  double best_value = objective_from(sub, sub.r, best_z);

  for (std::size_t it = 1; it <= cfg.max_iter; ++it) {
    if (refactorize) llt = factorize();
    result.z = llt.solve(cfg.rho * (sub.C.transpose() * (u - sub.r - w)));
    const Vector affine = sub.C * result.z + sub.r;
    const Vector u_prev = u;
    u = soft_threshold(affine + w, threshold);
    w += affine - u;

    result.iters = it;
    result.primal_residual = (affine - u).norm();
    result.dual_residual = cfg.rho * (sub.C.transpose() * (u - u_prev)).norm();

    const double value = objective_from(sub, affine, result.z);
    if (value < best_value) {
      best_value = value;
      best_z = result.z;
    }
    if (result.primal_residual <= cfg.tol_primal * (1.0 + u.norm()) &&
        result.dual_residual <= cfg.tol_dual) {
      result.converged = true;
      break;
    }
  }

  // z = 0 is always feasible, so never return anything worse than the best
  // iterate seen, which starts at z = 0.
  if (!result.converged || sub.objective(result.z) > best_value) result.z = best_z;
  return result;
}

}  // namespace

QPSubproblem QPSubproblem::linearize(const PhaseRetrievalInstance& inst, const Vector& x,
                                     double alpha) {
  if (static_cast<std::size_t>(x.size()) != inst.d())
    throw ValidationError("linearize: dimension mismatch");
  QPSubproblem sub;
  const Vector inner = inst.A * x;
  sub.C = (2.0 * inner).asDiagonal() * inst.A;
  sub.r = inner.array().square().matrix() - inst.b;
  sub.center = x;
  sub.alpha = alpha;
  sub.validate();
  return sub;
}

void QPSubproblem::validate() const {
  if (C.rows() == 0 || C.cols() == 0) throw ValidationError("QP subproblem: empty matrix");
  if (r.size() != C.rows()) throw ValidationError("QP subproblem: r must have one entry per row");
  if (center.size() != C.cols()) throw ValidationError("QP subproblem: center has wrong dimension");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("QP subproblem: alpha must be positive");
}

double QPSubproblem::objective(const Vector& z) const {
  return objective_from(*this, C * z + r, z);
}

void AdmmConfig::validate() const {
  if (!(rho > 0.0) || !(tol_primal > 0.0) || !(tol_dual > 0.0) || max_iter == 0)
    throw ValidationError("ADMM configuration values must be positive");
}

AdmmResult solve_subproblem(const QPSubproblem& sub, const AdmmConfig& cfg) {
  return run_admm(sub, cfg, false);
}

AdmmResult solve_subproblem_refactorizing(const QPSubproblem& sub, const AdmmConfig& cfg) {
  return run_admm(sub, cfg, true);
}

double descent_stepsize(const PhaseRetrievalInstance& inst) {
  const Eigen::MatrixXd gram = inst.A.transpose() * inst.A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  if (!(top > 0.0)) throw ValidationError("descent_stepsize: design matrix is zero");
  return static_cast<double>(inst.n()) / (2.0 * top);
}

RunTrace prox_linear_outer(const PhaseRetrievalInstance& inst, const Vector& x0, double alpha,
                           std::size_t iters, const AdmmConfig& cfg) {
  if (iters == 0) throw ValidationError("prox_linear_outer: iters must be positive");
  if (static_cast<std::size_t>(x0.size()) != inst.d())
    throw ValidationError("prox_linear_outer: dimension mismatch");

  RunTrace trace;
  trace.method = "proxlin-det";
  trace.schedule = {alpha, 0.0};
  trace.seed = inst.seed;
  trace.checkpoints.reserve(iters + 1);

  Vector x = x0;
  // One extra subproblem at the final iterate supplies its gradient mapping.
  for (std::size_t k = 0; k <= iters; ++k) {
    const AdmmResult step = solve_subproblem(QPSubproblem::linearize(inst, x, alpha), cfg);
    if (!step.converged) ++trace.unconverged_subproblems;
    trace.checkpoints.push_back(
        {static_cast<double>(k), objective(inst, x), step.z.norm() / alpha});
    if (k == iters) break;
    x += step.z;
    if (!x.allFinite()) {
      trace.diverged = true;
      break;
    }
  }
  return trace;
}

}  // namespace stochopt
