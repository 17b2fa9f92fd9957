#include <doctest.h>

#include <cmath>

#include "stochopt/errors.hpp"
#include "stochopt/problems.hpp"
#include "stochopt/schedules.hpp"

using namespace stochopt;

TEST_CASE("stepsize_at") {
  CHECK(stepsize_at({10.0, 0.5}, 4) == 5.0);
  CHECK(stepsize_at({3.0, 0.7}, 1) == 3.0);
  CHECK(stepsize_at({1.0, 1.0}, 1000) == doctest::Approx(0.001).epsilon(1e-15));
  CHECK_THROWS_AS(stepsize_at({1.0, 0.5}, 0), ValidationError);
  CHECK_THROWS_AS(Schedule({1.0, 0.3}).validate(), ValidationError);
  CHECK_THROWS_AS(Schedule({0.0, 0.6}).validate(), ValidationError);
  CHECK_THROWS_AS(Schedule({1.0, 1.1}).validate(), ValidationError);
  Schedule({1.0, 0.5}).validate();
  Schedule({1.0, 1.0}).validate();
}

TEST_CASE("summability of the schedule") {
  for (double beta : {0.6, 0.8, 1.0}) {
    const Schedule s{1.0, beta};
    double sum = 0.0, sum_sq = 0.0, sum_sq_half = 0.0;
    const std::uint64_t K = 1000000;
    for (std::uint64_t k = 1; k <= K; ++k) {
      const double a = s.at(k);
      const double before = sum;
      sum += a;
      REQUIRE(sum > before);
      sum_sq += a * a;
      if (k == K - K / 100) sum_sq_half = sum_sq;
    }
    // Cauchy tail over the last 1% of terms.
    CHECK((sum_sq - sum_sq_half) / sum_sq < 1e-3);
    CHECK(sum > 10.0);
  }
}

TEST_CASE("tune_schedule") {
  const auto inst = generate_instance(40, 5, {}, NoiseSpec::none(), 2);

  SUBCASE("single pair") {
    TuningGrid grid{{7.0}, {0.8}, 0};
    const auto out = tune_schedule(inst, ModelKind::prox_linear(), grid, 1);
    CHECK(out.schedule == Schedule{7.0, 0.8});
    CHECK(out.pilots.size() == 1);
  }
  SUBCASE("default grid runs 16 pilots deterministically") {
    const auto a = tune_schedule(inst, ModelKind::prox_linear(), {}, 5);
    const auto b = tune_schedule(inst, ModelKind::prox_linear(), {}, 5);
    CHECK(a.pilots.size() == 16);
    CHECK(a.schedule == b.schedule);
    for (std::size_t j = 0; j < 16; ++j)
      CHECK(a.pilots[j].best_objective == b.pilots[j].best_objective);
    // The selected pair has the smallest score among non-diverged pilots.
    for (const auto& p : a.pilots)
      if (!p.diverged) {
        for (const auto& q : a.pilots)
          if (q.schedule == a.schedule) CHECK(q.best_objective <= p.best_objective);
      }
  }
  SUBCASE("duplicate entries tie toward smaller alpha0") {
    TuningGrid grid{{5.0, 5.0}, {0.7}, 0};
    const auto out = tune_schedule(inst, ModelKind::subgradient(), grid, 3);
    CHECK(out.pilots[0].best_objective == out.pilots[1].best_objective);
    CHECK(out.schedule == Schedule{5.0, 0.7});
  }
  SUBCASE("huge stepsizes blow up the subgradient method") {
    TuningGrid grid{{1e200, 1e250}, {0.5}, 50};
    const auto out = tune_schedule(inst, ModelKind::subgradient(), grid, 3);
    CHECK(out.all_diverged);
    CHECK(out.pilots.size() == 2);
  }
  SUBCASE("invalid grids") {
    CHECK_THROWS_AS(tune_schedule(inst, ModelKind::prox_linear(), TuningGrid{{}, {0.6}, 0}, 1),
                    ValidationError);
    CHECK_THROWS_AS(tune_schedule(inst, ModelKind::prox_linear(), TuningGrid{{1.0}, {0.2}, 0}, 1),
                    ValidationError);
  }
}
