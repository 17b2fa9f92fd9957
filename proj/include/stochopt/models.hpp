#pragma once

#include <string>

#include "stochopt/linalg.hpp"
#include "stochopt/problems.hpp"

namespace stochopt {

/// Local convex model f_x(.; s) used by one stochastic step.
struct ModelKind {
  enum class Variant { subgradient, prox_linear, prox_point, guarded_prox_point };

  Variant variant = Variant::subgradient;
  // Radius of the trust ball; only read by guarded_prox_point.
  double epsilon = 1.0;

  static ModelKind subgradient() { return {Variant::subgradient, 1.0}; }
  static ModelKind prox_linear() { return {Variant::prox_linear, 1.0}; }
  static ModelKind prox_point() { return {Variant::prox_point, 1.0}; }
  static ModelKind guarded(double epsilon);

  // Short tag used on the command line and in CSV output:
  // sgm, proxlin, proxpt, guarded:EPS.
  std::string tag() const;
  static ModelKind parse(const std::string& tag);

  bool operator==(const ModelKind&) const = default;
};

/// phi(y) = (lambda / 2) ||y||^2, or nothing.
struct Regularizer {
  double lambda = 0.0;

  static Regularizer none() { return {}; }
  static Regularizer ridge(double lambda);

  bool active() const { return lambda > 0.0; }
  double value(const Vector& y) const { return active() ? 0.5 * lambda * y.squaredNorm() : 0.0; }
};

struct StepResult {
  Vector x_next;
  // [f_x(x) + phi(x)] - [f_x(x_next) + phi(x_next)]; nonnegative up to round-off.
  double model_decrease = 0.0;
};

// argmin_y |b + <a, y>| + 1/2 ||y - x0||^2 = x0 - clamp(lambda, -1, 1) a
// with lambda = (<x0, a> + b) / ||a||^2. Returns x0 when a = 0.
Vector prox_linear_canonical(const Vector& a, double b, const Vector& x0);

// argmin_w |(u0 + w)^2 - b| + (penalty / 2) w^2, exact by enumerating the
// stationary points of both quadratic branches, the kinks and w = 0.
double prox_scalar(double u0, double b, double penalty);
// Same problem restricted to |w| <= bound.
double prox_scalar_bounded(double u0, double b, double penalty, double bound);

// Stochastic subgradient step; with a ridge term the step is the exact
// minimizer x / (1 + alpha lambda) - alpha / (1 + alpha lambda) g.
StepResult step_subgradient(const Vector& x, const Sample& s, double alpha,
                            const Regularizer& reg = Regularizer::none());

// Minimizes alpha |c(x) + <grad c(x), y - x>| + 1/2 ||y - x||^2 (+ alpha phi).
// If <a, x> = 0 the linearization is constant and no move is made.
StepResult step_proxlinear(const Vector& x, const Sample& s, double alpha,
                           const Regularizer& reg = Regularizer::none());

// Minimizes |<a, y>^2 - b| + (lambda_s + 1/alpha)/2 ||y - x||^2 (+ phi).
// The minimizer lies on x + span(a) and is found with prox_scalar.
StepResult step_proxpoint(const Vector& x, const Sample& s, double alpha, double lambda_s,
                          const Regularizer& reg = Regularizer::none());

// step_proxpoint constrained to ||y - x|| <= epsilon.
StepResult step_guarded(const Vector& x, const Sample& s, double alpha, double lambda_s,
                        double epsilon);

// Dispatch on the model kind. Guarded steps do not support a regularizer.
StepResult model_step(const ModelKind& kind, const Vector& x, const Sample& s, double alpha,
                      double lambda_s, const Regularizer& reg = Regularizer::none());

// One step on sample i of an instance. Proximal models use the sample's
// weak-convexity constant 2 ||a_i||^2 as lambda_s.
StepResult instance_step(const ModelKind& kind, const PhaseRetrievalInstance& inst, std::size_t i,
                         const Vector& x, double alpha, const Regularizer& reg = Regularizer::none());

// f_x(y; s). Guarded models return +infinity outside the epsilon ball.
double model_value(const ModelKind& kind, const Vector& x, const Vector& y, const Sample& s,
                   double lambda_s);

// An element of the model's subdifferential at y = x.
Vector model_subgradient_at_center(const ModelKind& kind, const Vector& x, const Sample& s);

}  // namespace stochopt
