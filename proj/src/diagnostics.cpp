#include "stochopt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochopt/errors.hpp"
#include "stochopt/rng.hpp"
#include "stochopt/sampling.hpp"

namespace stochopt {
namespace {

bool is_proximal(const ModelKind& kind) {
  return kind.variant == ModelKind::Variant::prox_point ||
         kind.variant == ModelKind::Variant::guarded_prox_point;
}

Vector random_point(std::size_t d, double max_radius, Rng& rng) {
  Vector dir = sample_unit_sphere(d, rng);
  return (max_radius * rng.uniform()) * dir;
}

}  // namespace

Vector gradient_mapping(const ModelKind& kind, const Vector& x, const Sample& s, double alpha,
                        double lambda_s, const Regularizer& reg) {
  const StepResult step = model_step(kind, x, s, alpha, lambda_s, reg);
  return (x - step.x_next) / alpha;
}

GradMapReport check_gradmap_bound(const PhaseRetrievalInstance& inst, const ModelKind& kind,
                                  std::size_t probes, std::uint64_t seed,
                                  const Regularizer& reg) {
  if (probes == 0) throw ValidationError("check_gradmap_bound: probes must be >= 1");
  Rng rng(seed);
  GradMapReport report;
  report.worst_margin = std::numeric_limits<double>::infinity();
  const double log_lo = std::log(1e-4);
  const double log_hi = std::log(1e2);
  for (std::size_t p = 0; p < probes; ++p) {
    const Vector x = random_point(inst.d(), 2.0, rng);
    const auto i = static_cast<std::size_t>(rng.below(inst.n()));
    const double alpha = std::exp(log_lo + (log_hi - log_lo) * rng.uniform());
    const Sample s = inst.sample(i);
    const double lambda_s = is_proximal(kind) ? sample_weak_convexity(s) : 0.0;

    const double mapping = gradient_mapping(kind, x, s, alpha, lambda_s, reg).norm();
    Vector g = sample_subgradient(s, x);
    if (reg.active()) g += reg.lambda * x;
    const double bound = g.norm();
    report.probes.push_back({mapping, bound, bound - mapping});
    report.worst_margin = std::min(report.worst_margin, bound - mapping);
  }
  report.max_violation = std::max(0.0, -report.worst_margin);
  return report;
}

ModelConditionReport check_model_conditions(const PhaseRetrievalInstance& inst,
                                            const ModelKind& kind, std::size_t probes,
                                            double radius, std::uint64_t seed) {
  if (probes == 0) throw ValidationError("check_model_conditions: probes must be >= 1");
  if (!(radius > 0.0)) throw ValidationError("check_model_conditions: radius must be positive");
  const double inf = std::numeric_limits<double>::infinity();
  // Guarded models are +inf outside their ball, so stay inside it.
  const double reach =
      kind.variant == ModelKind::Variant::guarded_prox_point ? std::min(radius, kind.epsilon)
                                                             : radius;

  Rng rng(seed);
  ModelConditionReport report{0.0, inf, inf, inf};
  for (std::size_t p = 0; p < probes; ++p) {
    const Vector x = random_point(inst.d(), 2.0, rng);
    const auto i = static_cast<std::size_t>(rng.below(inst.n()));
    const Sample s = inst.sample(i);
    const double weak = sample_weak_convexity(s);
    const double lambda_s = is_proximal(kind) ? weak : 0.0;
    auto model = [&](const Vector& y) { return model_value(kind, x, y, s, lambda_s); };

    const double fx = sample_value(s, x);
    report.equality_error = std::max(report.equality_error, std::abs(model(x) - fx));

    const Vector y1 = x + random_point(inst.d(), reach, rng);
    const Vector y2 = x + random_point(inst.d(), reach, rng);
    const Vector mid = 0.5 * (y1 + y2);
    report.convexity_slack =
        std::min(report.convexity_slack, 0.5 * (model(y1) + model(y2)) - model(mid));

    const Vector y = x + random_point(inst.d(), reach, rng);
    const double dist2 = (y - x).squaredNorm();
    const double fy = sample_value(s, y);
    const Vector g = model_subgradient_at_center(kind, x, s);
    report.subgradient_slack =
        std::min(report.subgradient_slack, fy - fx - g.dot(y - x) + 0.5 * weak * dist2);
    report.lower_bound_slack =
        std::min(report.lower_bound_slack, fy - model(y) + 0.5 * weak * dist2);
  }
  return report;
}

InterpolatedPath InterpolatedPath::from_iterates(std::vector<Vector> iterates,
                                                 const std::vector<double>& stepsizes) {
  if (iterates.empty() || stepsizes.size() + 1 != iterates.size())
    throw ValidationError("interpolated path needs one stepsize per step");
  InterpolatedPath path;
  path.points = std::move(iterates);
  path.times.reserve(path.points.size());
  double t = 0.0;
  path.times.push_back(t);
  for (double alpha : stepsizes) {
    t += alpha;
    path.times.push_back(t);
  }
  path.validate();
  return path;
}

void InterpolatedPath::validate() const {
  if (times.empty() || times.size() != points.size())
    throw ValidationError("interpolated path: times and points must match");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1]))
      throw ValidationError("interpolated path: knot times must increase strictly");
}

Vector interpolate(const InterpolatedPath& path, double t) {
  path.validate();
  if (!(t >= path.times.front() && t <= path.times.back()))
    throw ValidationError("interpolate: t outside the path's time range");
  const auto upper = std::upper_bound(path.times.begin(), path.times.end(), t);
  const auto k = static_cast<std::size_t>(upper - path.times.begin()) - 1;
  if (path.times[k] == t || k + 1 == path.times.size()) return path.points[k];
  const double theta = (t - path.times[k]) / (path.times[k + 1] - path.times[k]);
  return path.points[k] + theta * (path.points[k + 1] - path.points[k]);
}

NoiseTailReport noise_tail(const PhaseRetrievalInstance& inst, const ModelKind& kind,
                           const Schedule& schedule, std::size_t iters,
                           std::size_t probe_full_mean_every, std::uint64_t seed) {
  if (iters == 0) throw ValidationError("noise_tail: iters must be >= 1");
  if (probe_full_mean_every == 0) throw ValidationError("noise_tail: probe cadence must be >= 1");
  schedule.validate();

  Rng init_rng = Rng::derive(seed, 0);
  Rng sample_rng = Rng::derive(seed, 1);
  Vector x = sample_unit_sphere(inst.d(), init_rng);
  const std::size_t n = inst.n();

  auto mapping_at = [&](const Vector& point, std::size_t i, double alpha) {
    return Vector((point - instance_step(kind, inst, i, point, alpha).x_next) / alpha);
  };

  NoiseTailReport report;
  report.partial_sum_norms.reserve(iters);
  for (std::size_t start = 1; start <= iters; start *= 10) {
    report.window_start.push_back(start);
    report.window_end.push_back(std::min(iters, 10 * start - 1));
    report.tail_sup.push_back(0.0);
  }

  Vector sum = Vector::Zero(x.size());
  Vector window_base = sum;
  Vector mean = Vector::Zero(x.size());
  std::size_t window = 0;
  for (std::size_t k = 1; k <= iters; ++k) {
    if (k > report.window_end[window]) {
      ++window;
      window_base = sum;
    }
    const double alpha = schedule.at(k);
    const auto i = static_cast<std::size_t>(sample_rng.below(n));
    const Vector next = instance_step(kind, inst, i, x, alpha).x_next;
    const Vector sampled = (x - next) / alpha;
    if (n == 1) {
      mean = sampled;
    } else if ((k - 1) % probe_full_mean_every == 0) {
      mean.setZero();
      for (std::size_t j = 0; j < n; ++j) mean += mapping_at(x, j, alpha);
      mean /= static_cast<double>(n);
    }
    sum += alpha * (sampled - mean);
    report.partial_sum_norms.push_back(sum.norm());
    report.tail_sup[window] = std::max(report.tail_sup[window], (sum - window_base).norm());
    x = next;
    if (!x.allFinite() || !sum.allFinite())
      throw std::runtime_error("noise_tail: iterates diverged");
  }
  return report;
}

}  // namespace stochopt
