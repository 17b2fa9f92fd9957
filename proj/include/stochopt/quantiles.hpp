#pragma once

#include <vector>

#include "stochopt/trace.hpp"

namespace stochopt {

struct QuantileSummary {
  std::vector<double> pass;
  std::vector<double> median;
  std::vector<double> q10;
  std::vector<double> q90;
};

// Linear interpolation between order statistics: position (m - 1) q in the
// sorted sample. +inf entries (diverged runs) sort last.
double quantile(std::vector<double> values, double q);

// Per-checkpoint quantiles of objective - references[j] across traces j.
// Empty references summarize raw objectives. All traces must share the same
// checkpoint passes.
QuantileSummary summarize_quantiles(const std::vector<RunTrace>& traces,
                                    const std::vector<double>& references = {});

// Smallest objective recorded by any trace; the f(x*) stand-in for gaps.
double gap_reference(const std::vector<const RunTrace*>& traces);
double gap_reference(const std::vector<RunTrace>& traces);

}  // namespace stochopt
