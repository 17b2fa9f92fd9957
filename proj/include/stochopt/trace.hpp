#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stochopt/schedules.hpp"

namespace stochopt {

struct Checkpoint {
  // Iterations divided by n for stochastic runs; outer iterations for the
  // deterministic baseline.
  double pass = 0.0;
  double objective = 0.0;
  double grad_map_norm = 0.0;
};

struct RunTrace {
  std::string method;
  Schedule schedule;
  std::uint64_t seed = 0;
  std::vector<Checkpoint> checkpoints;
  bool diverged = false;
  // Deterministic baseline: subproblems that hit the ADMM iteration cap.
  std::size_t unconverged_subproblems = 0;

  double min_objective() const;
};

}  // namespace stochopt
