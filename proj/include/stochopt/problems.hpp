#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "stochopt/linalg.hpp"

namespace stochopt {

struct NoiseSpec {
  enum class Kind { noiseless, laplace, corrupted };

  Kind kind = Kind::noiseless;
  double sigma = 0.0;     // laplace scale
  double fraction = 0.0;  // corrupted: per-observation probability
  double variance = 0.0;  // corrupted: variance of the replacement draw

  static NoiseSpec none() { return {}; }
  static NoiseSpec laplace(double sigma);
  static NoiseSpec corrupted(double fraction, double variance);

  void validate() const;
  // "none", "laplace:1", "corrupt:0.1:25"
  std::string to_string() const;
  static NoiseSpec parse(const std::string& text);
};

struct DesignSpec {
  enum class Kind { UR, RU };

  Kind kind = Kind::UR;
  double kappa = 1.0;

  void validate() const;
  std::string kind_name() const { return kind == Kind::UR ? "ur" : "ru"; }
  static Kind parse_kind(const std::string& text);
};

// One observation (a_i, b_i). The view aliases the instance's storage.
struct Sample {
  VectorView a;
  double b;
};

/// Robust phase retrieval: minimize (1/n) sum_i |<a_i, x>^2 - b_i|.
struct PhaseRetrievalInstance {
  Matrix A;  // rows are the measurement vectors a_i
  Vector b;
  Vector x_star;
  DesignSpec design;
  NoiseSpec noise;
  std::uint64_t seed = 0;

  std::size_t n() const { return static_cast<std::size_t>(A.rows()); }
  std::size_t d() const { return static_cast<std::size_t>(A.cols()); }

  // Unchecked row access; the public oracles below validate the index.
  Sample sample(std::size_t i) const {
    const auto row = static_cast<Eigen::Index>(i);
    return {VectorView(A.row(row).data(), A.cols()), b[row]};
  }
};

// Diagonal entries 1 + (kappa - 1) j / (m - 1), j = 0..m-1; kappa when m == 1.
Vector linear_spacing(std::size_t m, double kappa);

PhaseRetrievalInstance generate_instance(std::size_t n, std::size_t d, const DesignSpec& design,
                                         const NoiseSpec& noise, std::uint64_t seed);

// Per-sample pieces of f(x; s) = |c(x; s)| with c(x; s) = <a, x>^2 - b.
double residual(const Sample& s, const Vector& x);
double sample_value(const Sample& s, const Vector& x);
// sign(c) * 2<a, x> a, with sign(0) = 0.
Vector sample_subgradient(const Sample& s, const Vector& x);
// 2 ||a||^2: |.| is 1-Lipschitz and grad c has Lipschitz constant 2||a||^2.
double sample_weak_convexity(const Sample& s);

double objective(const PhaseRetrievalInstance& inst, const Vector& x);

struct ResidualGrad {
  double c;
  Vector grad_c;
};

ResidualGrad residual_and_grad(const PhaseRetrievalInstance& inst, std::size_t i, const Vector& x);
Vector subgradient(const PhaseRetrievalInstance& inst, std::size_t i, const Vector& x);
double weak_convexity_constant(const PhaseRetrievalInstance& inst, std::size_t i);

}  // namespace stochopt
