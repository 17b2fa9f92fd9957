#include "stochopt/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "stochopt/errors.hpp"

namespace stochopt {
namespace {

void check_inputs(const Vector& x, const Sample& s, double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw ValidationError("stepsize must be positive and finite");
  if (s.a.size() != x.size())
    throw ValidationError("dimension mismatch between iterate and measurement vector");
  if (!x.allFinite() || !s.a.allFinite() || !std::isfinite(s.b))
    throw ValidationError("nonfinite step input");
}

double sign_of(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Regularized model objective without the proximal term.
double regularized_model(const ModelKind& kind, const Vector& x, const Vector& y, const Sample& s,
                         double lambda_s, const Regularizer& reg) {
  return model_value(kind, x, y, s, lambda_s) + reg.value(y);
}

StepResult finish(const ModelKind& kind, const Vector& x, Vector x_next, const Sample& s,
                  double lambda_s, const Regularizer& reg) {
  const double before = regularized_model(kind, x, x, s, lambda_s, reg);
  const double after = regularized_model(kind, x, x_next, s, lambda_s, reg);
  return {std::move(x_next), before - after};
}

struct ScalarProblem {
  double u0;
  double b;
  double penalty;

  double operator()(double w) const {
    const double t = u0 + w;
    return std::abs(t * t - b) + 0.5 * penalty * w * w;
  }
};

double minimize_scalar(const ScalarProblem& psi, double bound) {
  const double inf = std::numeric_limits<double>::infinity();
  std::array<double, 8> candidates{};
  std::size_t count = 0;
  auto add = [&](double w) {
    if (std::isfinite(w) && std::abs(w) <= bound) candidates[count++] = w;
  };

  add(0.0);
  // (u0 + w)^2 >= b branch: convex, stationary at -2 u0 / (2 + penalty).
  add(-2.0 * psi.u0 / (2.0 + psi.penalty));
  if (psi.b >= 0.0) {
    // (u0 + w)^2 <= b branch: stationary at 2 u0 / (penalty - 2).
    if (psi.penalty != 2.0) add(2.0 * psi.u0 / (psi.penalty - 2.0));
    const double root = std::sqrt(psi.b);
    add(root - psi.u0);
    add(-root - psi.u0);
  }
  if (bound < inf) {
    add(bound);
    add(-bound);
  }

  // Every candidate is scored with psi itself, so a stationary point that
  // falls outside its branch only ever scores above the true minimum; the
  // branch-region check reduces to this comparison.
  double best_w = candidates[0];
  double best_value = psi(best_w);
  for (std::size_t k = 1; k < count; ++k) {
    const double w = candidates[k];
    const double value = psi(w);
    if (value < best_value || (value == best_value && std::abs(w) < std::abs(best_w))) {
      best_w = w;
      best_value = value;
    }
  }
  return best_w;
}

}  // namespace

ModelKind ModelKind::guarded(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon))
    throw ValidationError("guarded model radius must be positive");
  return {Variant::guarded_prox_point, epsilon};
}

std::string ModelKind::tag() const {
  switch (variant) {
    case Variant::subgradient:
      return "sgm";
    case Variant::prox_linear:
      return "proxlin";
    case Variant::prox_point:
      return "proxpt";
    case Variant::guarded_prox_point: {
      std::ostringstream out;
      out.precision(17);
      out << "guarded:" << epsilon;
      return out.str();
    }
  }
  return "unknown";
}

ModelKind ModelKind::parse(const std::string& tag) {
  if (tag == "sgm") return subgradient();
  if (tag == "proxlin") return prox_linear();
  if (tag == "proxpt") return prox_point();
  if (tag == "guarded") return guarded(1.0);
  if (tag.rfind("guarded:", 0) == 0) {
    const std::string value = tag.substr(8);
    std::size_t used = 0;
    double eps = 0.0;
    try {
      eps = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != value.size())
      throw ValidationError("cannot parse guarded radius from '" + tag + "'");
    return guarded(eps);
  }
  throw ValidationError("unknown method '" + tag + "' (expected sgm, proxlin, proxpt, guarded:EPS)");
}

Regularizer Regularizer::ridge(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("ridge parameter must be positive");
  return {lambda};
}

Vector prox_linear_canonical(const Vector& a, double b, const Vector& x0) {
  const double norm2 = a.squaredNorm();
  if (norm2 == 0.0) return x0;
  const double lambda = (x0.dot(a) + b) / norm2;
  return x0 - std::clamp(lambda, -1.0, 1.0) * a;
}

double prox_scalar(double u0, double b, double penalty) {
  return prox_scalar_bounded(u0, b, penalty, std::numeric_limits<double>::infinity());
}

double prox_scalar_bounded(double u0, double b, double penalty, double bound) {
  if (!std::isfinite(u0) || !std::isfinite(b) || !std::isfinite(penalty))
    throw ValidationError("prox_scalar: nonfinite input");
  if (!(penalty > 0.0)) throw ValidationError("prox_scalar: penalty must be positive");
  if (!(bound >= 0.0)) throw ValidationError("prox_scalar: bound must be nonnegative");
  return minimize_scalar({u0, b, penalty}, bound);
}

StepResult step_subgradient(const Vector& x, const Sample& s, double alpha,
                            const Regularizer& reg) {
  check_inputs(x, s, alpha);
  const Vector g = sample_subgradient(s, x);
  Vector next = reg.active() ? Vector((x - alpha * g) / (1.0 + alpha * reg.lambda))
                             : Vector(x - alpha * g);
  return finish(ModelKind::subgradient(), x, std::move(next), s, 0.0, reg);
}

StepResult step_proxlinear(const Vector& x, const Sample& s, double alpha, const Regularizer& reg) {
  check_inputs(x, s, alpha);
  const double inner = s.a.dot(x);
  const double r = inner * inner - s.b;
  const Vector v = (2.0 * inner) * s.a;

  // The ridge and proximal quadratics merge into one centred at x + shift
  // with the effective stepsize alpha / (1 + alpha lambda).
  double step = alpha;
  Vector shift = Vector::Zero(x.size());
  if (reg.active()) {
    step = alpha / (1.0 + alpha * reg.lambda);
    shift = (-alpha * reg.lambda / (1.0 + alpha * reg.lambda)) * x;
  }

  Vector next = x + shift;
  const double v_norm2 = v.squaredNorm();
  if (v_norm2 > 0.0) {
    // Canonical form: |b~ + <a~, w>| + 1/2 ||w||^2 with a~ = step v and
    // b~ = step (r + <v, shift>).
    const double lambda = (r + v.dot(shift)) / (step * v_norm2);
    next -= (std::clamp(lambda, -1.0, 1.0) * step) * v;
  }
  return finish(ModelKind::prox_linear(), x, std::move(next), s, 0.0, reg);
}

StepResult step_proxpoint(const Vector& x, const Sample& s, double alpha, double lambda_s,
                          const Regularizer& reg) {
  check_inputs(x, s, alpha);
  if (!(lambda_s >= 0.0) || !std::isfinite(lambda_s))
    throw ValidationError("weak-convexity constant must be nonnegative");

  const double prox_weight = lambda_s + 1.0 / alpha;
  const double total_weight = prox_weight + reg.lambda;
  Vector center = reg.active() ? Vector((prox_weight / total_weight) * x) : x;

  const double a_norm2 = s.a.squaredNorm();
  if (a_norm2 > 0.0) {
    const double w = prox_scalar(s.a.dot(center), s.b, total_weight / a_norm2);
    center += (w / a_norm2) * s.a;
  }
  return finish(ModelKind::prox_point(), x, std::move(center), s, lambda_s, reg);
}

StepResult step_guarded(const Vector& x, const Sample& s, double alpha, double lambda_s,
                        double epsilon) {
  check_inputs(x, s, alpha);
  if (!(lambda_s >= 0.0) || !std::isfinite(lambda_s))
    throw ValidationError("weak-convexity constant must be nonnegative");
  const ModelKind kind = ModelKind::guarded(epsilon);

  Vector next = x;
  const double a_norm2 = s.a.squaredNorm();
  if (a_norm2 > 0.0) {
    const double penalty = (lambda_s + 1.0 / alpha) / a_norm2;
    // ||y - x|| = |w| / ||a||; the bound is shrunk by one ulp-scale factor so
    // the rescaled step never lands outside the ball through rounding.
    const double bound = epsilon * std::sqrt(a_norm2) * (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
    const double w = prox_scalar_bounded(s.a.dot(x), s.b, penalty, bound);
    next += (w / a_norm2) * s.a;
  }
  return finish(kind, x, std::move(next), s, lambda_s, Regularizer::none());
}

StepResult model_step(const ModelKind& kind, const Vector& x, const Sample& s, double alpha,
                      double lambda_s, const Regularizer& reg) {
  switch (kind.variant) {
    case ModelKind::Variant::subgradient:
      return step_subgradient(x, s, alpha, reg);
    case ModelKind::Variant::prox_linear:
      return step_proxlinear(x, s, alpha, reg);
    case ModelKind::Variant::prox_point:
      return step_proxpoint(x, s, alpha, lambda_s, reg);
    case ModelKind::Variant::guarded_prox_point:
      if (reg.active()) throw ValidationError("guarded steps do not support a regularizer");
      return step_guarded(x, s, alpha, lambda_s, kind.epsilon);
  }
  throw ValidationError("unknown model kind");
}

StepResult instance_step(const ModelKind& kind, const PhaseRetrievalInstance& inst, std::size_t i,
                         const Vector& x, double alpha, const Regularizer& reg) {
  if (i >= inst.n()) throw ValidationError("sample index out of range");
  const Sample s = inst.sample(i);
  const bool proximal = kind.variant == ModelKind::Variant::prox_point ||
                        kind.variant == ModelKind::Variant::guarded_prox_point;
  return model_step(kind, x, s, alpha, proximal ? sample_weak_convexity(s) : 0.0, reg);
}

double model_value(const ModelKind& kind, const Vector& x, const Vector& y, const Sample& s,
                   double lambda_s) {
  if (x.size() != y.size() || s.a.size() != x.size())
    throw ValidationError("model_value: dimension mismatch");
  switch (kind.variant) {
    case ModelKind::Variant::subgradient:
      return sample_value(s, x) + sample_subgradient(s, x).dot(y - x);
    case ModelKind::Variant::prox_linear: {
      const double inner = s.a.dot(x);
      return std::abs(inner * inner - s.b + 2.0 * inner * s.a.dot(y - x));
    }
    case ModelKind::Variant::prox_point:
      return sample_value(s, y) + 0.5 * lambda_s * (y - x).squaredNorm();
    case ModelKind::Variant::guarded_prox_point: {
      const double dist2 = (y - x).squaredNorm();
      if (dist2 > kind.epsilon * kind.epsilon) return std::numeric_limits<double>::infinity();
      return sample_value(s, y) + 0.5 * lambda_s * dist2;
    }
  }
  throw ValidationError("unknown model kind");
}

Vector model_subgradient_at_center(const ModelKind& kind, const Vector& x, const Sample& s) {
  // Every model shares f's selected subgradient at the centre: the linear and
  // prox-linear models by construction, the proximal models because the
  // added quadratic has zero gradient there.
  (void)kind;
  const double inner = s.a.dot(x);
  return (sign_of(inner * inner - s.b) * 2.0 * inner) * s.a;
}

}  // namespace stochopt
