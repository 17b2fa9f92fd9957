#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stochopt/models.hpp"
#include "stochopt/problems.hpp"
#include "stochopt/schedules.hpp"

namespace stochopt {

// G_alpha(x; s) = (x - x_alpha^+(s)) / alpha for the model's step.
Vector gradient_mapping(const ModelKind& kind, const Vector& x, const Sample& s, double alpha,
                        double lambda_s, const Regularizer& reg = Regularizer::none());

struct GradMapProbe {
  double mapping_norm;     // ||G_alpha(x; s)||
  double subgradient_norm; // ||g + grad phi(x)|| for the selected g
  double margin;           // subgradient_norm - mapping_norm
};

struct GradMapReport {
  std::vector<GradMapProbe> probes;
  double worst_margin = 0.0;
  // max(0, -worst_margin)
  double max_violation = 0.0;
};

/// Fuzzes ||G_alpha(x; s)|| <= ||G(x; s)||: x uniform on the sphere scaled
/// by Uniform[0, 2], i uniform, alpha log-uniform on [1e-4, 1e2].
GradMapReport check_gradmap_bound(const PhaseRetrievalInstance& inst, const ModelKind& kind,
                                  std::size_t probes, std::uint64_t seed,
                                  const Regularizer& reg = Regularizer::none());

struct ModelConditionReport {
  // Worst |f_x(x) - f(x)|.
  double equality_error = 0.0;
  // Worst (f_x(y1) + f_x(y2)) / 2 - f_x((y1 + y2) / 2); convexity needs >= 0.
  double convexity_slack = 0.0;
  // Worst f(y) - f(x) - <g_model, y - x> + (lambda / 2) ||y - x||^2.
  double subgradient_slack = 0.0;
  // Worst f(y) - f_x(y) + (delta / 2) ||y - x||^2 with delta = 2 ||a||^2.
  double lower_bound_slack = 0.0;
};

/// Probes the model conditions at points within `radius` of random centres:
/// equality at y = x, midpoint convexity in y, the weak-convexity
/// certificate for the model's subgradient at x, and the local lower bound.
ModelConditionReport check_model_conditions(const PhaseRetrievalInstance& inst,
                                            const ModelKind& kind, std::size_t probes,
                                            double radius, std::uint64_t seed);

struct InterpolatedPath {
  std::vector<double> times;  // strictly increasing
  std::vector<Vector> points;

  // Knots at t_0 = 0 and t_k = alpha_1 + ... + alpha_k.
  static InterpolatedPath from_iterates(std::vector<Vector> iterates,
                                        const std::vector<double>& stepsizes);
  void validate() const;
};

Vector interpolate(const InterpolatedPath& path, double t);

struct NoiseTailReport {
  // ||sum_{k <= m} alpha_k xi_k|| for m = 1..iters.
  std::vector<double> partial_sum_norms;
  // Decade windows [10^j, 10^(j+1)) of iteration indices, clipped to iters.
  std::vector<std::size_t> window_start;
  std::vector<std::size_t> window_end;
  // sup over m in the window of ||S_m - S_(start - 1)||.
  std::vector<double> tail_sup;
};

/// Runs `iters` steps of the method and accumulates alpha_k xi_k with
/// xi_k = G(x_k; s_k) - mean_i G(x_k; i). The exact mean over all n samples
/// is refreshed every probe_full_mean_every iterations and reused in
/// between; with n = 1 the mean is the sampled term itself.
NoiseTailReport noise_tail(const PhaseRetrievalInstance& inst, const ModelKind& kind,
                           const Schedule& schedule, std::size_t iters,
                           std::size_t probe_full_mean_every, std::uint64_t seed);

}  // namespace stochopt
