#pragma once

#include <Eigen/Dense>

namespace stochopt {

using Vector = Eigen::VectorXd;
// Row-major so that each measurement row a_i is contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorView = Eigen::Map<const Vector>;

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace stochopt
