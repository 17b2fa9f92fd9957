#include "stochopt/runner.hpp"

#include <algorithm>
#include <cmath>

#include "stochopt/errors.hpp"
#include "stochopt/rng.hpp"
#include "stochopt/sampling.hpp"

namespace stochopt {
namespace {

Vector starting_point(const PhaseRetrievalInstance& inst, std::uint64_t seed,
                      const RunOptions& options) {
  if (options.x0) {
    if (static_cast<std::size_t>(options.x0->size()) != inst.d())
      throw ValidationError("initial point has wrong dimension");
    return *options.x0;
  }
  return initial_point(inst.d(), seed);
}

}  // namespace

Vector initial_point(std::size_t d, std::uint64_t run_seed) {
  Rng rng = Rng::derive(run_seed, 0);
  return sample_unit_sphere(d, rng);
}

std::vector<std::size_t> probe_indices(std::size_t n) {
  const std::size_t m = std::min<std::size_t>(n, 64);
  std::vector<std::size_t> indices(m);
  for (std::size_t j = 0; j < m; ++j) indices[j] = j * n / m;
  return indices;
}

double mean_gradient_mapping_norm(const PhaseRetrievalInstance& inst, const ModelKind& method,
                                  const Vector& x, double alpha, const Regularizer& reg,
                                  const std::vector<std::size_t>& probes) {
  if (probes.empty()) return 0.0;
  Vector sum = Vector::Zero(x.size());
  for (std::size_t i : probes) sum += x - instance_step(method, inst, i, x, alpha, reg).x_next;
  return sum.norm() / (alpha * static_cast<double>(probes.size()));
}

RunTrace run_single(const PhaseRetrievalInstance& inst, const ModelKind& method,
                    const Schedule& schedule, std::uint64_t seed, std::size_t budget_passes,
                    const RunOptions& options) {
  if (budget_passes == 0) throw ValidationError("budget_passes must be >= 1");
  schedule.validate();
  const std::size_t n = inst.n();
  const std::size_t every = options.checkpoint_every > 0 ? options.checkpoint_every : n;
  const std::uint64_t total = static_cast<std::uint64_t>(budget_passes) * n;
  const auto probes = probe_indices(n);

  RunTrace trace;
  trace.method = method.tag();
  trace.schedule = schedule;
  trace.seed = seed;
  trace.checkpoints.reserve(total / every + 2);

  Vector x = starting_point(inst, seed, options);
  Rng sample_rng = Rng::derive(seed, 1);

  auto record = [&](std::uint64_t k) {
    const double value = objective(inst, x);
    if (!std::isfinite(value)) return false;
    const double alpha = schedule.at(std::max<std::uint64_t>(k, 1));
    const double gm = mean_gradient_mapping_norm(inst, method, x, alpha, options.reg, probes);
    if (!std::isfinite(gm)) return false;
    trace.checkpoints.push_back({static_cast<double>(k) / static_cast<double>(n), value, gm});
    return true;
  };

  if (!record(0)) {
    trace.diverged = true;
    return trace;
  }
  for (std::uint64_t k = 1; k <= total; ++k) {
    const auto i = static_cast<std::size_t>(sample_rng.below(n));
    x = instance_step(method, inst, i, x, schedule.at(k), options.reg).x_next;
    if (!x.allFinite()) {
      trace.diverged = true;
      break;
    }
    if ((k % every == 0 || k == total) && !record(k)) {
      trace.diverged = true;
      break;
    }
  }
  return trace;
}

HittingTime first_hitting_time(const PhaseRetrievalInstance& inst, const ModelKind& method,
                               const Schedule& schedule, std::uint64_t seed, double eps,
                               std::uint64_t cap_iters, const RunOptions& options) {
  if (cap_iters == 0) throw ValidationError("hitting-time cap must be >= 1");
  schedule.validate();
  Vector x = starting_point(inst, seed, options);
  Rng sample_rng = Rng::derive(seed, 1);
  for (std::uint64_t k = 1; k <= cap_iters; ++k) {
    const auto i = static_cast<std::size_t>(sample_rng.below(inst.n()));
    x = instance_step(method, inst, i, x, schedule.at(k), options.reg).x_next;
    if (!x.allFinite()) break;
    if (objective(inst, x) <= eps) return {k, false};
  }
  return {cap_iters, true};
}

HittingTime time_to_epsilon(const std::vector<double>& objectives, double eps,
                            std::uint64_t cap_iters) {
  if (cap_iters == 0) throw ValidationError("hitting-time cap must be >= 1");
  const std::uint64_t limit = std::min<std::uint64_t>(cap_iters, objectives.size());
  for (std::uint64_t k = 1; k <= limit; ++k)
    if (objectives[k - 1] <= eps) return {k, false};
  return {cap_iters, true};
}

}  // namespace stochopt
