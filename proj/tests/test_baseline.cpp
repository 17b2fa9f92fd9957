#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stochopt/baseline.hpp"
#include "stochopt/errors.hpp"
#include "stochopt/models.hpp"
#include "stochopt/problems.hpp"
#include "stochopt/rng.hpp"
#include "stochopt/runner.hpp"
#include "stochopt/sampling.hpp"

using namespace stochopt;

namespace {

PhaseRetrievalInstance random_instance(std::size_t n, std::size_t d, Rng& rng) {
  PhaseRetrievalInstance inst;
  inst.A = Matrix(n, d);
  inst.b = Vector(n);
  for (Eigen::Index i = 0; i < inst.A.rows(); ++i) {
    for (Eigen::Index j = 0; j < inst.A.cols(); ++j) inst.A(i, j) = rng.normal();
    inst.b[i] = 2.0 * rng.uniform();
  }
  inst.x_star = Vector::Zero(d);
  return inst;
}

}  // namespace

TEST_CASE("QPSubproblem") {
  const auto inst = generate_instance(10, 3, {}, NoiseSpec::none(), 1);
  const Vector x = Vector::Ones(3);
  const auto sub = QPSubproblem::linearize(inst, x, 0.5);
  for (std::size_t i = 0; i < 10; ++i) {
    const auto rg = residual_and_grad(inst, i, x);
    CHECK(std::abs(sub.r[i] - rg.c) <= 1e-15);
    CHECK((sub.C.row(i).transpose() - rg.grad_c).norm() <= 1e-15);
  }
  CHECK(sub.objective(Vector::Zero(3)) == doctest::Approx(objective(inst, x)).epsilon(1e-14));

  auto bad = sub;
  bad.alpha = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = sub;
  bad.r = Vector::Zero(4);
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(solve_subproblem(sub, AdmmConfig{0.0}), ValidationError);
}

TEST_CASE("solve_subproblem") {
  Rng rng(3);
  SUBCASE("r = 0 gives z = 0") {
    const auto inst = random_instance(6, 3, rng);
    auto sub = QPSubproblem::linearize(inst, Vector::Ones(3), 1.0);
    sub.r.setZero();
    CHECK(solve_subproblem(sub).z.norm() <= 1e-10);
  }
  SUBCASE("n = 1 matches the closed-form step") {
    for (int trial = 0; trial < 50; ++trial) {
      const Vector a = Vector::NullaryExpr(4, [&] { return rng.normal(); });
      const auto inst = oracle::single_row(a, 2.0 * rng.uniform());
      const Vector x = Vector::NullaryExpr(4, [&] { return rng.normal(); });
      const double alpha = std::exp(std::log(1e-2) + rng.uniform() * std::log(1e3));
      const auto res = solve_subproblem(QPSubproblem::linearize(inst, x, alpha));
      const Vector closed = step_proxlinear(x, inst.sample(0), alpha).x_next;
      CHECK((x + res.z - closed).norm() <= 1e-6);
    }
  }
  SUBCASE("d = 2, n = 3 matches a grid") {
    for (int trial = 0; trial < 5; ++trial) {
      const auto inst = random_instance(3, 2, rng);
      const Vector x = 0.5 * sample_unit_sphere(2, rng);
      const auto sub = QPSubproblem::linearize(inst, x, 0.5);
      const auto res = solve_subproblem(sub);
      CHECK(res.converged);
      const auto grid = oracle::grid_min_2d(
          [&](double u, double v) {
            Vector z(2);
            z << u, v;
            return sub.objective(z);
          },
          -2, 2, 401, 6);
      CHECK(sub.objective(res.z) <= grid.value + 1e-6);
    }
  }
  SUBCASE("never worse than z = 0") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto inst = random_instance(15, 4, rng);
      const auto sub = QPSubproblem::linearize(inst, sample_unit_sphere(4, rng), 10.0);
      AdmmConfig cfg;
      cfg.max_iter = 5;
      const auto res = solve_subproblem(sub, cfg);
      CHECK_FALSE(res.converged);
      CHECK(sub.objective(res.z) <= sub.objective(Vector::Zero(4)));
    }
  }
  SUBCASE("factor reuse does not change the iterates") {
    const auto inst = random_instance(12, 3, rng);
    const auto sub = QPSubproblem::linearize(inst, Vector::Ones(3), 0.3);
    const auto once = solve_subproblem(sub);
    const auto every = solve_subproblem_refactorizing(sub);
    CHECK((once.z - every.z).norm() <= 1e-12);
    CHECK(once.iters == every.iters);
  }
}

TEST_CASE("prox_linear_outer") {
  SUBCASE("starting at the signal stays there") {
    const auto inst = generate_instance(40, 5, {}, NoiseSpec::none(), 8);
    const auto trace = prox_linear_outer(inst, inst.x_star, 1.0, 10);
    CHECK(trace.checkpoints.size() == 11);
    for (const auto& c : trace.checkpoints) CHECK(c.objective <= 1e-10);
  }
  SUBCASE("small alpha gives monotone descent") {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      const auto inst = generate_instance(40, 5, {}, NoiseSpec::laplace(0.5), seed);
      double worst = 0.0;
      for (std::size_t i = 0; i < 40; ++i) worst = std::max(worst, weak_convexity_constant(inst, i));
      const auto trace = prox_linear_outer(inst, initial_point(5, seed + 100), 1.0 / worst, 30);
      for (std::size_t k = 1; k < trace.checkpoints.size(); ++k)
        CHECK(trace.checkpoints[k].objective <= trace.checkpoints[k - 1].objective + 1e-9);
    }
  }
  SUBCASE("descent stepsize also descends") {
    const auto inst = generate_instance(60, 6, {DesignSpec::Kind::UR, 3.0}, NoiseSpec::none(), 4);
    const auto trace = prox_linear_outer(inst, initial_point(6, 104), descent_stepsize(inst), 40);
    for (std::size_t k = 1; k < trace.checkpoints.size(); ++k)
      CHECK(trace.checkpoints[k].objective <= trace.checkpoints[k - 1].objective + 1e-9);
    CHECK(trace.checkpoints.back().objective < trace.checkpoints.front().objective);
    CHECK(trace.method == "proxlin-det");
  }
  CHECK_THROWS_AS(prox_linear_outer(generate_instance(5, 2, {}, NoiseSpec::none(), 0),
                                    Vector::Ones(2), 1.0, 0),
                  ValidationError);
}
