#include "stochopt/sampling.hpp"

#include <cmath>

#include "stochopt/errors.hpp"

namespace stochopt {

Vector sample_unit_sphere(std::size_t d, Rng& rng) {
  if (d == 0) throw ValidationError("sample_unit_sphere: dimension must be positive");
  Vector v(static_cast<Eigen::Index>(d));
  double norm = 0.0;
  // A zero Gaussian vector has probability zero; redraw rather than divide by 0.
  while (norm == 0.0) {
    for (Eigen::Index j = 0; j < v.size(); ++j) v[j] = rng.normal();
    norm = v.norm();
  }
  return v / norm;
}

Matrix sample_orthogonal(std::size_t n, std::size_t d, Rng& rng) {
  if (d == 0 || n < d) {
    throw ValidationError("sample_orthogonal: need n >= d >= 1, got n=" + std::to_string(n) +
                          " d=" + std::to_string(d));
  }
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd gauss(rows, cols);
  // Fill row by row so the draw order does not depend on storage order.
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) gauss(i, j) = rng.normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
  const Eigen::MatrixXd& packed = qr.matrixQR();
  for (Eigen::Index j = 0; j < cols; ++j) {
    if (packed(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return Matrix(q);
}

double laplace_quantile(double u, double scale) {
  if (!(scale > 0.0)) throw ValidationError("laplace: scale must be positive");
  if (!(u > 0.0 && u < 1.0)) throw ValidationError("laplace_quantile: u must lie in (0, 1)");
  const double centered = u - 0.5;
  if (centered == 0.0) return 0.0;
  const double sign = centered > 0.0 ? 1.0 : -1.0;
  return -scale * sign * std::log1p(-2.0 * std::abs(centered));
}

double sample_laplace(double scale, Rng& rng) {
  if (!(scale > 0.0)) throw ValidationError("sample_laplace: scale must be positive");
  return laplace_quantile(rng.uniform_open(), scale);
}

}  // namespace stochopt
