#pragma once

#include <cstddef>

#include "stochopt/linalg.hpp"
#include "stochopt/rng.hpp"

namespace stochopt {

// Uniform point on S^{d-1}: normalized standard Gaussian vector.
Vector sample_unit_sphere(std::size_t d, Rng& rng);

// n x d matrix with orthonormal columns, Haar distributed: thin QR of an
// i.i.d. Gaussian matrix with each column's sign flipped so diag(R) > 0.
Matrix sample_orthogonal(std::size_t n, std::size_t d, Rng& rng);

// Laplace(0, scale) by inverse CDF of one uniform draw.
double sample_laplace(double scale, Rng& rng);

// Inverse CDF of Laplace(0, scale) at u in (0, 1).
double laplace_quantile(double u, double scale);

}  // namespace stochopt
