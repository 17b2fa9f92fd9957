#pragma once

// Brute-force references for the unit and acceptance suites. Nothing here
// calls into the closed forms it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "stochopt/linalg.hpp"
#include "stochopt/problems.hpp"

namespace oracle {

struct GridMin1d {
  double argmin;
  double value;
};

// Uniform grid of `points` on [lo, hi]; each further level lays a grid of
// the same size on the two cells around every discrete local minimum of the
// previous one, so a near-tie between basins cannot hide the true one.
template <class F>
GridMin1d grid_min_1d(const F& f, double lo, double hi, std::size_t points, int levels = 2) {
  GridMin1d best{lo, std::numeric_limits<double>::infinity()};
  std::vector<std::pair<double, double>> cells{{lo, hi}};
  struct Cell {
    double value, a, b;
  };
  std::vector<double> ts(points), vs(points);
  for (int level = 0; level < levels && !cells.empty(); ++level) {
    std::vector<Cell> next;
    for (const auto& [a, b] : cells) {
      const double h = (b - a) / static_cast<double>(points - 1);
      for (std::size_t k = 0; k < points; ++k) {
        ts[k] = a + h * static_cast<double>(k);
        vs[k] = f(ts[k]);
        if (vs[k] < best.value) best = {ts[k], vs[k]};
      }
      for (std::size_t k = 0; k < points; ++k) {
        const bool left = k == 0 || vs[k] <= vs[k - 1];
        const bool right = k + 1 == points || vs[k] <= vs[k + 1];
        if (left && right) next.push_back({vs[k], std::max(lo, ts[k] - h), std::min(hi, ts[k] + h)});
      }
    }
    // Round-off plateaus produce many tied minima; the lowest few suffice.
    const std::size_t keep = std::min<std::size_t>(next.size(), 4);
    std::partial_sort(next.begin(), next.begin() + keep, next.end(),
                      [](const Cell& x, const Cell& y) { return x.value < y.value; });
    cells.clear();
    for (std::size_t j = 0; j < keep; ++j) cells.emplace_back(next[j].a, next[j].b);
  }
  return best;
}

// All grid points whose value is within `slack` of the minimum, thinned to
// one representative per contiguous run (i.e. one per basin).
template <class F>
std::vector<double> grid_basins(const F& f, double lo, double hi, std::size_t points,
                                double slack) {
  std::vector<double> values(points);
  std::vector<double> ts(points);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points; ++k) {
    ts[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
    values[k] = f(ts[k]);
    best = std::min(best, values[k]);
  }
  std::vector<double> basins;
  bool inside = false;
  for (std::size_t k = 0; k < points; ++k) {
    const bool near = values[k] <= best + slack;
    if (near && !inside) basins.push_back(ts[k]);
    inside = near;
  }
  return basins;
}

struct GridMin2d {
  double x;
  double y;
  double value;
};

// points x points grid on [lo, hi]^2 followed by `zooms` rounds of a 41 x 41
// grid on the neighbouring cells of the current winner. Intended for convex
// objectives, where zooming converges to the global minimum.
template <class F>
GridMin2d grid_min_2d(const F& f, double lo, double hi, std::size_t points, int zooms) {
  GridMin2d best{lo, lo, std::numeric_limits<double>::infinity()};
  auto scan = [&](double x0, double x1, double y0, double y1, std::size_t m) {
    for (std::size_t i = 0; i < m; ++i) {
      const double x = x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(m - 1);
      for (std::size_t j = 0; j < m; ++j) {
        const double y = y0 + (y1 - y0) * static_cast<double>(j) / static_cast<double>(m - 1);
        const double v = f(x, y);
        if (v < best.value) best = {x, y, v};
      }
    }
  };
  scan(lo, hi, lo, hi, points);
  double h = (hi - lo) / static_cast<double>(points - 1);
  for (int z = 0; z < zooms; ++z) {
    const double cx = best.x;
    const double cy = best.y;
    scan(cx - h, cx + h, cy - h, cy + h, 41);
    h /= 20.0;
  }
  return best;
}

inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd up = x, down = x;
    up[j] += h;
    down[j] -= h;
    g[j] = (f(up) - f(down)) / (2.0 * h);
  }
  return g;
}

// A one-row instance with the given measurement, for hand-computed examples.
inline stochopt::PhaseRetrievalInstance single_row(const Eigen::VectorXd& a, double b) {
  stochopt::PhaseRetrievalInstance inst;
  inst.A = a.transpose();
  inst.b = Eigen::VectorXd::Constant(1, b);
  inst.x_star = Eigen::VectorXd::Zero(a.size());
  return inst;
}

}  // namespace oracle
