#include <doctest.h>

#include <cmath>

#include "stochopt/diagnostics.hpp"
#include "stochopt/errors.hpp"
#include "stochopt/problems.hpp"
#include "stochopt/rng.hpp"
#include "stochopt/sampling.hpp"

using namespace stochopt;

namespace {

const ModelKind kAllKinds[] = {ModelKind::subgradient(), ModelKind::prox_linear(),
                               ModelKind::prox_point(), ModelKind::guarded(1.0)};

}  // namespace

TEST_CASE("gradient_mapping") {
  const auto inst = generate_instance(30, 5, {}, NoiseSpec::laplace(1.0), 2);
  Rng rng(3);
  SUBCASE("subgradient model returns g") {
    for (int k = 0; k < 50; ++k) {
      const Vector x = sample_unit_sphere(5, rng);
      const auto i = static_cast<std::size_t>(rng.below(30));
      const Vector g = subgradient(inst, i, x);
      const Vector G = gradient_mapping(ModelKind::subgradient(), x, inst.sample(i), 0.37, 0.0);
      CHECK((G - g).norm() <= 1e-12 * (1 + g.norm()));
    }
  }
  SUBCASE("zero residual gives zero mapping") {
    const auto clean = generate_instance(30, 5, {}, NoiseSpec::none(), 2);
    for (const auto& kind : kAllKinds) {
      const Sample s = clean.sample(4);
      const Vector G =
          gradient_mapping(kind, clean.x_star, s, 1.0, 2 * Vector(s.a).squaredNorm());
      CHECK(G.norm() <= 1e-12);
    }
  }
  CHECK_THROWS_AS(gradient_mapping(ModelKind::prox_linear(), Vector::Ones(5), inst.sample(0), 0.0,
                                   0.0),
                  ValidationError);
}

TEST_CASE("check_gradmap_bound") {
  const auto inst = generate_instance(50, 6, {DesignSpec::Kind::UR, 5.0}, NoiseSpec::laplace(1.0), 5);
  for (const auto& kind : kAllKinds) {
    const auto report = check_gradmap_bound(inst, kind, 1000, 11);
    INFO(kind.tag());
    CHECK(report.probes.size() == 1000);
    CHECK(report.max_violation <= 1e-9);
  }
  SUBCASE("identity for the subgradient method") {
    const auto report = check_gradmap_bound(inst, ModelKind::subgradient(), 500, 12);
    for (const auto& p : report.probes)
      CHECK(std::abs(p.margin) <= 1e-12 * (1 + p.subgradient_norm));
  }
  SUBCASE("with a ridge term") {
    for (const auto& kind :
         {ModelKind::subgradient(), ModelKind::prox_linear(), ModelKind::prox_point()}) {
      const auto report = check_gradmap_bound(inst, kind, 500, 13, Regularizer::ridge(0.3));
      CHECK(report.max_violation <= 1e-9);
    }
  }
  CHECK_THROWS_AS(check_gradmap_bound(inst, ModelKind::prox_linear(), 0, 1), ValidationError);
}

TEST_CASE("check_model_conditions") {
  const auto inst = generate_instance(50, 6, {}, NoiseSpec::corrupted(0.2, 4.0), 6);
  for (const auto& kind : kAllKinds) {
    const auto r = check_model_conditions(inst, kind, 1000, 0.1, 21);
    INFO(kind.tag());
    CHECK(r.equality_error <= 1e-12);
    CHECK(r.convexity_slack >= -1e-9);
    CHECK(r.subgradient_slack >= -1e-9);
    CHECK(r.lower_bound_slack >= -1e-9);
  }
}

TEST_CASE("interpolate") {
  std::vector<Vector> pts;
  Rng rng(4);
  for (int k = 0; k < 6; ++k) pts.push_back(sample_unit_sphere(3, rng));
  const std::vector<double> steps{0.5, 0.25, 1.0, 0.125, 2.0};
  const auto path = InterpolatedPath::from_iterates(pts, steps);
  REQUIRE(path.times.size() == 6);
  CHECK(path.times[0] == 0.0);
  CHECK(path.times[5] == 3.875);
  for (std::size_t k = 0; k < 6; ++k) CHECK(interpolate(path, path.times[k]) == pts[k]);
  for (std::size_t k = 0; k < 5; ++k) {
    const double mid = 0.5 * (path.times[k] + path.times[k + 1]);
    CHECK((interpolate(path, mid) - 0.5 * (pts[k] + pts[k + 1])).norm() <= 1e-15);
  }

  double lip = 0.0;
  for (std::size_t k = 0; k < 5; ++k) lip = std::max(lip, (pts[k + 1] - pts[k]).norm() / steps[k]);
  for (int trial = 0; trial < 200; ++trial) {
    const double t1 = rng.uniform() * 3.875;
    const double t2 = rng.uniform() * 3.875;
    CHECK((interpolate(path, t1) - interpolate(path, t2)).norm() <=
          lip * std::abs(t1 - t2) + 1e-12);
  }

  CHECK_THROWS_AS(interpolate(path, -0.1), ValidationError);
  CHECK_THROWS_AS(interpolate(path, 4.0), ValidationError);
  CHECK_THROWS_AS(InterpolatedPath::from_iterates(pts, {1.0, 1.0}), ValidationError);
  CHECK_THROWS_AS(InterpolatedPath::from_iterates(pts, {1.0, 0.0, 1.0, 1.0, 1.0}), ValidationError);
}

TEST_CASE("noise_tail") {
  SUBCASE("n = 1 has no sampling noise") {
    const auto inst = generate_instance(1, 1, {}, NoiseSpec::laplace(1.0), 3);
    const auto r = noise_tail(inst, ModelKind::prox_linear(), {1.0, 0.7}, 500, 10, 4);
    for (double v : r.partial_sum_norms) CHECK(v == 0.0);
    for (double v : r.tail_sup) CHECK(v == 0.0);
  }
  SUBCASE("windows cover the run") {
    const auto inst = generate_instance(40, 4, {}, NoiseSpec::laplace(0.5), 3);
    const auto r = noise_tail(inst, ModelKind::subgradient(), {1.0, 0.9}, 2500, 1, 4);
    CHECK(r.partial_sum_norms.size() == 2500);
    REQUIRE(r.window_start.size() == 4);
    CHECK(r.window_start.front() == 1);
    CHECK(r.window_end.back() == 2500);
    for (double v : r.tail_sup) CHECK(std::isfinite(v));
  }
  CHECK_THROWS_AS(noise_tail(generate_instance(4, 2, {}, NoiseSpec::none(), 0),
                             ModelKind::prox_linear(), {1.0, 0.7}, 0, 1, 0),
                  ValidationError);
}

TEST_CASE("noise tails shrink along a beta = 0.9 run") {
  const auto inst = generate_instance(50, 5, {}, NoiseSpec::laplace(1.0), 8);
  const auto r = noise_tail(inst, ModelKind::prox_linear(), {20.0, 0.9}, 100000, 50, 9);
  REQUIRE(r.tail_sup.size() >= 2);
  CHECK(r.tail_sup.back() < r.tail_sup.front());

  const auto half = noise_tail(inst, ModelKind::prox_linear(), {20.0, 0.9}, 50000, 50, 9);
  CHECK(r.tail_sup.back() <= 2.0 * half.tail_sup.back());
}
