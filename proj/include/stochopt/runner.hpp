#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "stochopt/models.hpp"
#include "stochopt/problems.hpp"
#include "stochopt/schedules.hpp"
#include "stochopt/trace.hpp"

namespace stochopt {

struct RunOptions {
  // Iterations between checkpoints; 0 means once per pass (n iterations).
  std::size_t checkpoint_every = 0;
  // Overrides the seeded uniform-on-sphere initial point.
  std::optional<Vector> x0;
  Regularizer reg;
};

// Initial point of a run: uniform on the unit sphere, drawn from the run seed.
Vector initial_point(std::size_t d, std::uint64_t run_seed);

// Indices of the fixed probe samples used for the gradient-mapping proxy:
// min(n, 64) indices spread evenly over [0, n).
std::vector<std::size_t> probe_indices(std::size_t n);

// || (1/m) sum_j G_alpha(x; s_j) || over the probe samples.
double mean_gradient_mapping_norm(const PhaseRetrievalInstance& inst, const ModelKind& method,
                                  const Vector& x, double alpha, const Regularizer& reg,
                                  const std::vector<std::size_t>& probes);

/// One seeded stochastic run of budget_passes * n iterations. Sample i_k is
/// uniform on [0, n) and step k uses alpha_k from the schedule. Checkpoints
/// are taken at k = 0, every checkpoint_every iterations and at the end.
/// A nonfinite iterate or objective truncates the trace and sets diverged.
RunTrace run_single(const PhaseRetrievalInstance& inst, const ModelKind& method,
                    const Schedule& schedule, std::uint64_t seed, std::size_t budget_passes,
                    const RunOptions& options = {});

struct HittingTime {
  std::uint64_t T = 0;
  bool capped = false;
};

// T(eps) = min{k >= 1 : f(x_k) <= eps}, or cap_iters when no iterate up to
// cap_iters qualifies (including after divergence). Uses the same initial
// point and sample stream as run_single with the same seed.
HittingTime first_hitting_time(const PhaseRetrievalInstance& inst, const ModelKind& method,
                               const Schedule& schedule, std::uint64_t seed, double eps,
                               std::uint64_t cap_iters, const RunOptions& options = {});

// Same rule on a recorded sequence, objectives[k - 1] = f(x_k).
HittingTime time_to_epsilon(const std::vector<double>& objectives, double eps,
                            std::uint64_t cap_iters);

}  // namespace stochopt
