#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stochopt/baseline.hpp"
#include "stochopt/models.hpp"
#include "stochopt/problems.hpp"
#include "stochopt/quantiles.hpp"
#include "stochopt/schedules.hpp"
#include "stochopt/trace.hpp"

namespace stochopt {

struct ExperimentSpec {
  enum class Kind { comparison, conditioning, stepsize_grid };

  Kind kind = Kind::comparison;
  std::string id = "comparison";
  std::size_t n = 500;
  std::size_t d = 50;
  DesignSpec design;
  NoiseSpec noise;
  std::vector<ModelKind> methods{ModelKind::subgradient(), ModelKind::prox_linear()};
  std::size_t replications = 100;
  std::size_t budget_passes = 200;
  double epsilon = 1e-2;
  std::uint64_t master_seed = 0;

  // comparison / conditioning: pilot tuning, or a fixed schedule when off.
  bool tune = true;
  TuningGrid tuning;
  Schedule fixed_schedule{1.0, 0.6};
  // Deterministic prox-linear baseline, budget_passes outer iterations.
  // baseline_alpha = 0 selects descent_stepsize(instance).
  bool include_baseline = true;
  double baseline_alpha = 0.0;
  AdmmConfig admm;

  // stepsize_grid
  std::vector<double> grid_alpha0;
  std::vector<double> grid_beta;

  // Worker threads; 0 uses the hardware concurrency.
  std::size_t threads = 0;

  // Paper-scale defaults for each suite.
  static ExperimentSpec defaults(Kind kind);
  static Kind parse_kind(const std::string& text);
  static std::string kind_name(Kind kind);
  void validate() const;
};

std::vector<double> default_grid_alpha0();  // 2^-1, 2^1, ..., 2^11
std::vector<double> default_grid_beta();    // 0.50, 0.55, ..., 1.00

struct MethodRuns {
  std::string method;
  std::vector<RunTrace> traces;  // one per replication
  QuantileSummary summary;       // gaps, diverged runs padded with +inf
};

struct TimeToEps {
  std::string method;
  double alpha0 = 0.0;
  double beta = 0.0;
  std::size_t rep = 0;
  std::uint64_t T = 0;
  bool capped = false;
};

struct ExperimentOutput {
  ExperimentSpec spec;
  std::vector<double> references;  // per replication
  std::vector<MethodRuns> methods;
  std::vector<TimeToEps> tte;
};

// Seeds: replication j uses seed_j = derive(master_seed, j); its instance is
// generated from derive(seed_j, 0), pilots share derive(seed_j, 1) and every
// method's run shares derive(seed_j, 2). Replications run on worker threads;
// results are assembled in replication order, so output is independent of
// scheduling.
ExperimentOutput compute_experiment(const ExperimentSpec& spec);

// Writes traces.csv + summary.csv, or tte.csv for the stepsize grid, and
// returns the paths written.
std::vector<std::filesystem::path> write_experiment(const ExperimentOutput& out,
                                                    const std::filesystem::path& dir);

std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec,
                                                  const std::filesystem::path& dir);

}  // namespace stochopt
