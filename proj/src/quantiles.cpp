#include "stochopt/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stochopt/errors.hpp"

namespace stochopt {

double RunTrace::min_objective() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : checkpoints) best = std::min(best, c.objective);
  return best;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw ValidationError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0 || lo + 1 >= values.size() || values[lo] == values[lo + 1]) return values[lo];
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

QuantileSummary summarize_quantiles(const std::vector<RunTrace>& traces,
                                    const std::vector<double>& references) {
  if (traces.empty()) throw ValidationError("summarize_quantiles: no traces");
  if (!references.empty() && references.size() != traces.size())
    throw ValidationError("summarize_quantiles: one reference per trace required");

  const auto& first = traces.front().checkpoints;
  for (const auto& t : traces) {
    bool aligned = t.checkpoints.size() == first.size();
    for (std::size_t c = 0; aligned && c < first.size(); ++c)
      aligned = t.checkpoints[c].pass == first[c].pass;
    if (!aligned) throw ValidationError("summarize_quantiles: misaligned checkpoints");
  }

  QuantileSummary summary;
  std::vector<double> gaps(traces.size());
  for (std::size_t c = 0; c < first.size(); ++c) {
    for (std::size_t j = 0; j < traces.size(); ++j) {
      const double ref = references.empty() ? 0.0 : references[j];
      gaps[j] = traces[j].checkpoints[c].objective - ref;
    }
    summary.pass.push_back(first[c].pass);
    summary.median.push_back(quantile(gaps, 0.5));
    summary.q10.push_back(quantile(gaps, 0.1));
    summary.q90.push_back(quantile(gaps, 0.9));
  }
  return summary;
}

double gap_reference(const std::vector<const RunTrace*>& traces) {
  if (traces.empty()) throw ValidationError("gap_reference: no traces");
  double best = std::numeric_limits<double>::infinity();
  for (const RunTrace* t : traces) best = std::min(best, t->min_objective());
  return best;
}

double gap_reference(const std::vector<RunTrace>& traces) {
  std::vector<const RunTrace*> ptrs;
  for (const auto& t : traces) ptrs.push_back(&t);
  return gap_reference(ptrs);
}

}  // namespace stochopt
