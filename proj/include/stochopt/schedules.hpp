#pragma once

#include <cstdint>
#include <vector>

#include "stochopt/models.hpp"
#include "stochopt/problems.hpp"

namespace stochopt {

/// alpha_k = alpha0 * k^(-beta).
struct Schedule {
  double alpha0 = 1.0;
  double beta = 0.5;

  // alpha0 > 0 and beta in [0.5, 1].
  void validate() const;
  double at(std::uint64_t k) const;

  bool operator==(const Schedule&) const = default;
};

double stepsize_at(const Schedule& s, std::uint64_t k);

struct TuningGrid {
  std::vector<double> alpha0_values{1.0, 10.0, 100.0, 1000.0};
  std::vector<double> beta_values{0.6, 0.7, 0.8, 0.9};
  // 0 means 3n pilot steps.
  std::uint64_t pilot_iters = 0;

  void validate() const;
};

struct PilotScore {
  Schedule schedule;
  double best_objective;
  bool diverged;
};

struct TuningOutcome {
  Schedule schedule;
  // Set when every pilot produced a nonfinite iterate; the choice then falls
  // back to the smallest objective seen before divergence.
  bool all_diverged = false;
  std::vector<PilotScore> pilots;
};

/// Pilot-run selection: every (alpha0, beta) pair runs pilot_iters steps from
/// the same initial point with the same sample stream, and the pair with the
/// smallest objective seen during its pilot wins. Non-diverged pilots rank
/// ahead of diverged ones; ties go to smaller alpha0, then smaller beta.
TuningOutcome tune_schedule(const PhaseRetrievalInstance& inst, const ModelKind& method,
                            const TuningGrid& grid, std::uint64_t master_seed);

}  // namespace stochopt
