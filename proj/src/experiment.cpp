#include "stochopt/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "stochopt/csv.hpp"
#include "stochopt/errors.hpp"
#include "stochopt/rng.hpp"
#include "stochopt/runner.hpp"

namespace stochopt {
namespace {

struct ReplicationResult {
  std::vector<RunTrace> traces;  // one per method column
  double reference = 0.0;
  std::vector<TimeToEps> tte;
};

std::vector<std::string> method_columns(const ExperimentSpec& spec) {
  std::vector<std::string> names;
  for (const auto& m : spec.methods) names.push_back(m.tag());
  if (spec.kind != ExperimentSpec::Kind::stepsize_grid && spec.include_baseline)
    names.push_back("proxlin-det");
  return names;
}

ReplicationResult run_replication(const ExperimentSpec& spec, std::size_t rep) {
  const std::uint64_t seed = Rng::derive_seed(spec.master_seed, rep);
  const PhaseRetrievalInstance inst =
      generate_instance(spec.n, spec.d, spec.design, spec.noise, Rng::derive_seed(seed, 0));
  const std::uint64_t pilot_seed = Rng::derive_seed(seed, 1);
  const std::uint64_t run_seed = Rng::derive_seed(seed, 2);

  ReplicationResult result;
  if (spec.kind == ExperimentSpec::Kind::stepsize_grid) {
    const std::uint64_t cap = static_cast<std::uint64_t>(spec.budget_passes) * spec.n;
    for (const auto& method : spec.methods)
      for (double alpha0 : spec.grid_alpha0)
        for (double beta : spec.grid_beta) {
          const auto hit = first_hitting_time(inst, method, {alpha0, beta}, run_seed,
                                              spec.epsilon, cap);
          result.tte.push_back({method.tag(), alpha0, beta, rep, hit.T, hit.capped});
        }
    return result;
  }

  for (const auto& method : spec.methods) {
    const Schedule schedule =
        spec.tune ? tune_schedule(inst, method, spec.tuning, pilot_seed).schedule
                  : spec.fixed_schedule;
    result.traces.push_back(run_single(inst, method, schedule, run_seed, spec.budget_passes));
  }
  if (spec.include_baseline) {
    const double alpha =
        spec.baseline_alpha > 0.0 ? spec.baseline_alpha : descent_stepsize(inst);
    result.traces.push_back(prox_linear_outer(inst, initial_point(spec.d, run_seed), alpha,
                                              spec.budget_passes, spec.admm));
  }
  result.reference = gap_reference(result.traces);
  return result;
}

std::vector<ReplicationResult> run_all(const ExperimentSpec& spec) {
  std::vector<ReplicationResult> results(spec.replications);
  std::size_t workers = spec.threads > 0 ? spec.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, spec.replications);

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t worker) {
    try {
      for (std::size_t rep = next++; rep < spec.replications; rep = next++)
        results[rep] = run_replication(spec, rep);
    } catch (...) {
      errors[worker] = std::current_exception();
      next = spec.replications;
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

// Diverged traces stop early; extend them with +inf objectives so every
// replication contributes a value at every checkpoint.
std::vector<RunTrace> pad_diverged(std::vector<RunTrace> traces) {
  const RunTrace* longest = nullptr;
  for (const auto& t : traces)
    if (longest == nullptr || t.checkpoints.size() > longest->checkpoints.size()) longest = &t;
  const auto full = longest->checkpoints;
  for (auto& t : traces) {
    for (std::size_t c = t.checkpoints.size(); c < full.size(); ++c)
      t.checkpoints.push_back({full[c].pass, std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity()});
  }
  return traces;
}

}  // namespace

std::vector<double> default_grid_alpha0() {
  std::vector<double> values;
  for (int e = -1; e <= 11; e += 2) values.push_back(std::ldexp(1.0, e));
  return values;
}

std::vector<double> default_grid_beta() {
  std::vector<double> values;
  for (int j = 0; j <= 10; ++j) values.push_back((50.0 + 5.0 * j) / 100.0);
  return values;
}

ExperimentSpec ExperimentSpec::defaults(Kind kind) {
  ExperimentSpec spec;
  spec.kind = kind;
  spec.id = kind_name(kind);
  switch (kind) {
    case Kind::comparison:
      break;
    case Kind::conditioning:
      spec.design = {DesignSpec::Kind::UR, 10.0};
      spec.noise = NoiseSpec::laplace(1.0);
      break;
    case Kind::stepsize_grid:
      spec.methods = {ModelKind::subgradient(), ModelKind::prox_linear(), ModelKind::prox_point()};
      spec.replications = 250;
      spec.include_baseline = false;
      spec.tune = false;
      spec.grid_alpha0 = default_grid_alpha0();
      spec.grid_beta = default_grid_beta();
      break;
  }
  return spec;
}

ExperimentSpec::Kind ExperimentSpec::parse_kind(const std::string& text) {
  if (text == "comparison") return Kind::comparison;
  if (text == "conditioning") return Kind::conditioning;
  if (text == "stepsize_grid" || text == "stepsize-grid") return Kind::stepsize_grid;
  throw ValidationError("unknown experiment '" + text +
                        "' (expected comparison, conditioning or stepsize_grid)");
}

std::string ExperimentSpec::kind_name(Kind kind) {
  switch (kind) {
    case Kind::comparison:
      return "comparison";
    case Kind::conditioning:
      return "conditioning";
    case Kind::stepsize_grid:
      return "stepsize_grid";
  }
  return "unknown";
}

void ExperimentSpec::validate() const {
  if (d == 0 || n < d) throw ValidationError("experiment needs n >= d >= 1");
  design.validate();
  noise.validate();
  if (replications == 0) throw ValidationError("replications must be >= 1");
  if (budget_passes == 0) throw ValidationError("budget_passes must be >= 1");
  if (methods.empty()) throw ValidationError("experiment needs at least one method");
  if (id.empty() || id.find_first_of(",\n\r") != std::string::npos)
    throw ValidationError("experiment id must be nonempty and free of commas and newlines");
  if (kind == Kind::stepsize_grid) {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    if (grid_alpha0.empty() || grid_beta.empty())
      throw ValidationError("stepsize grid must be nonempty");
    for (double a : grid_alpha0)
      for (double b : grid_beta) Schedule{a, b}.validate();
  } else {
    if (tune) {
      tuning.validate();
    } else {
      fixed_schedule.validate();
    }
    if (include_baseline) {
      if (!(baseline_alpha >= 0.0)) throw ValidationError("baseline alpha must be nonnegative");
      admm.validate();
    }
  }
}

ExperimentOutput compute_experiment(const ExperimentSpec& spec) {
  spec.validate();
  auto results = run_all(spec);

  ExperimentOutput out;
  out.spec = spec;
  if (spec.kind == ExperimentSpec::Kind::stepsize_grid) {
    for (auto& r : results)
      for (auto& row : r.tte) out.tte.push_back(std::move(row));
    return out;
  }

  const auto names = method_columns(spec);
  for (std::size_t m = 0; m < names.size(); ++m) {
    MethodRuns runs;
    runs.method = names[m];
    for (auto& r : results) runs.traces.push_back(std::move(r.traces[m]));
    out.methods.push_back(std::move(runs));
  }
  for (const auto& r : results) out.references.push_back(r.reference);
  for (auto& runs : out.methods)
    runs.summary = summarize_quantiles(pad_diverged(runs.traces), out.references);
  return out;
}

std::vector<std::filesystem::path> write_experiment(const ExperimentOutput& out,
                                                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), ec.message());

  const std::string& id = out.spec.id;
  std::vector<std::filesystem::path> written;

  if (out.spec.kind == ExperimentSpec::Kind::stepsize_grid) {
    CsvTable tte{{"experiment_id", "method", "alpha0", "beta", "rep", "T", "capped"}, {}};
    for (const auto& row : out.tte)
      tte.rows.push_back({id, row.method, format_double(row.alpha0), format_double(row.beta),
                          std::to_string(row.rep), std::to_string(row.T),
                          row.capped ? "1" : "0"});
    written.push_back(dir / "tte.csv");
    write_csv(written.back(), tte);
    return written;
  }

  CsvTable traces{{"experiment_id", "method", "alpha0", "beta", "rep", "pass", "objective", "gap",
                   "grad_map_norm", "diverged"},
                  {}};
  for (const auto& runs : out.methods) {
    for (std::size_t rep = 0; rep < runs.traces.size(); ++rep) {
      const RunTrace& t = runs.traces[rep];
      for (const auto& c : t.checkpoints)
        traces.rows.push_back({id, runs.method, format_double(t.schedule.alpha0),
                               format_double(t.schedule.beta), std::to_string(rep),
                               format_double(c.pass), format_double(c.objective),
                               format_double(c.objective - out.references[rep]),
                               format_double(c.grad_map_norm), t.diverged ? "1" : "0"});
    }
  }
  written.push_back(dir / "traces.csv");
  write_csv(written.back(), traces);

  CsvTable summary{{"experiment_id", "method", "pass", "median_gap", "q10_gap", "q90_gap"}, {}};
  for (const auto& runs : out.methods) {
    const auto& s = runs.summary;
    for (std::size_t c = 0; c < s.pass.size(); ++c)
      summary.rows.push_back({id, runs.method, format_double(s.pass[c]),
                              format_double(s.median[c]), format_double(s.q10[c]),
                              format_double(s.q90[c])});
  }
  written.push_back(dir / "summary.csv");
  write_csv(written.back(), summary);
  return written;
}

std::vector<std::filesystem::path> run_experiment(const ExperimentSpec& spec,
                                                  const std::filesystem::path& dir) {
  return write_experiment(compute_experiment(spec), dir);
}

}  // namespace stochopt
