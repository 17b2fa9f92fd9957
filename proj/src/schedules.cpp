#include "stochopt/schedules.hpp"

#include <cmath>
#include <limits>

#include "stochopt/errors.hpp"
#include "stochopt/rng.hpp"
#include "stochopt/sampling.hpp"

namespace stochopt {

void Schedule::validate() const {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0))
    throw ValidationError("initial stepsize alpha0 must be positive");
  if (!(beta >= 0.5 && beta <= 1.0))
    throw ValidationError("stepsize power beta must lie in [0.5, 1]");
}

double Schedule::at(std::uint64_t k) const {
  if (k == 0) throw ValidationError("stepsize index k must be >= 1");
  return alpha0 * std::pow(static_cast<double>(k), -beta);
}

double stepsize_at(const Schedule& s, std::uint64_t k) { return s.at(k); }

void TuningGrid::validate() const {
  if (alpha0_values.empty() || beta_values.empty())
    throw ValidationError("tuning grid must be nonempty");
  for (double a : alpha0_values) Schedule{a, beta_values.front()}.validate();
  for (double b : beta_values) Schedule{alpha0_values.front(), b}.validate();
}

TuningOutcome tune_schedule(const PhaseRetrievalInstance& inst, const ModelKind& method,
                            const TuningGrid& grid, std::uint64_t master_seed) {
  grid.validate();
  const std::uint64_t iters = grid.pilot_iters > 0 ? grid.pilot_iters : 3 * inst.n();

  Rng init_rng = Rng::derive(master_seed, 0);
  const Vector x0 = sample_unit_sphere(inst.d(), init_rng);

  TuningOutcome outcome;
  for (double alpha0 : grid.alpha0_values) {
    for (double beta : grid.beta_values) {
      const Schedule schedule{alpha0, beta};
      Rng sample_rng = Rng::derive(master_seed, 1);
      Vector x = x0;
      double best = std::numeric_limits<double>::infinity();
      bool diverged = false;
      for (std::uint64_t k = 1; k <= iters; ++k) {
        const auto i = static_cast<std::size_t>(sample_rng.below(inst.n()));
        x = instance_step(method, inst, i, x, schedule.at(k)).x_next;
        const double value = x.allFinite() ? objective(inst, x)
                                           : std::numeric_limits<double>::quiet_NaN();
        if (!std::isfinite(value)) {
          diverged = true;
          break;
        }
        best = std::min(best, value);
      }
      outcome.pilots.push_back({schedule, best, diverged});
    }
  }

  // Grid order is (alpha0, beta) as given; sort keys make ties deterministic.
  const PilotScore* winner = nullptr;
  auto better = [](const PilotScore& p, const PilotScore& q) {
    if (p.diverged != q.diverged) return !p.diverged;
    if (p.best_objective != q.best_objective) return p.best_objective < q.best_objective;
    if (p.schedule.alpha0 != q.schedule.alpha0) return p.schedule.alpha0 < q.schedule.alpha0;
    return p.schedule.beta < q.schedule.beta;
  };
  for (const auto& pilot : outcome.pilots)
    if (winner == nullptr || better(pilot, *winner)) winner = &pilot;

  outcome.schedule = winner->schedule;
  outcome.all_diverged = winner->diverged;
  return outcome;
}

}  // namespace stochopt
