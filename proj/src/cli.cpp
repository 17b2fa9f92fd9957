#include "stochopt/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include "stochopt/csv.hpp"
#include "stochopt/diagnostics.hpp"
#include "stochopt/errors.hpp"
#include "stochopt/experiment.hpp"
#include "stochopt/problems.hpp"
#include "stochopt/rng.hpp"
#include "stochopt/runner.hpp"
#include "stochopt/schedules.hpp"

namespace stochopt {
namespace {

constexpr double kMarginTolerance = 1e-9;
constexpr double kEqualityTolerance = 1e-12;

struct InstanceFlags {
  std::size_t n = 500;
  std::size_t d = 50;
  double kappa = 1.0;
  std::string design = "ur";
  std::string noise = "none";
  std::uint64_t seed = 0;

  void add_to(CLI::App& app) {
    app.add_option("--n", n, "Number of observations")->capture_default_str();
    app.add_option("--d", d, "Signal dimension")->capture_default_str();
    app.add_option("--kappa", kappa, "Condition number of the diagonal scaling")
        ->capture_default_str();
    app.add_option("--design", design, "Design: ur (A = UR) or ru (A = RU)")->capture_default_str();
    app.add_option("--noise", noise, "none, laplace:SIGMA or corrupt:P:VAR")->capture_default_str();
    app.add_option("--seed", seed, "Master seed")->capture_default_str();
  }

  DesignSpec design_spec() const {
    DesignSpec spec{DesignSpec::parse_kind(design), kappa};
    spec.validate();
    return spec;
  }
};

std::string trimmed(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

// Config-file values are inserted only for flags absent from the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> expanded;
  std::optional<std::string> config;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      config = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      config = args[k].substr(9);
    } else {
      expanded.push_back(args[k]);
    }
  }
  if (!config) return expanded;

  auto given = [&](const std::string& key) {
    const std::string flag = "--" + key;
    return std::any_of(expanded.begin(), expanded.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  std::vector<std::string> from_file;
  for (const auto& arg : config_to_args(*config)) {
    const std::string key = arg.substr(2, arg.find('=') - 2);
    if (!given(key)) from_file.push_back(arg);
  }
  // Subcommand first, then file values, then explicit flags.
  std::vector<std::string> merged;
  if (!expanded.empty()) merged.push_back(expanded.front());
  merged.insert(merged.end(), from_file.begin(), from_file.end());
  if (expanded.size() > 1) merged.insert(merged.end(), expanded.begin() + 1, expanded.end());
  return merged;
}

int cmd_generate(const InstanceFlags& flags, const std::string& out_dir, std::ostream& out) {
  const auto inst = generate_instance(flags.n, flags.d, flags.design_spec(),
                                      NoiseSpec::parse(flags.noise), flags.seed);
  for (const auto& path : write_instance(inst, out_dir)) out << path.string() << '\n';
  return 0;
}

int cmd_run(const InstanceFlags& flags, const std::string& instance_dir, const std::string& method_tag,
            std::optional<double> alpha0, std::optional<double> beta, std::size_t passes,
            const std::string& out_dir, std::ostream& out) {
  const PhaseRetrievalInstance inst =
      instance_dir.empty() ? generate_instance(flags.n, flags.d, flags.design_spec(),
                                               NoiseSpec::parse(flags.noise), flags.seed)
                           : read_instance(instance_dir);
  const ModelKind method = ModelKind::parse(method_tag);
  const std::uint64_t run_seed = Rng::derive_seed(flags.seed, 2);

  Schedule schedule;
  if (alpha0 && beta) {
    schedule = {*alpha0, *beta};
    schedule.validate();
  } else if (alpha0 || beta) {
    throw ValidationError("--alpha0 and --beta must be given together (or neither, to tune)");
  } else {
    schedule = tune_schedule(inst, method, {}, Rng::derive_seed(flags.seed, 1)).schedule;
  }

  ExperimentOutput result;
  result.spec.id = "run";
  result.spec.kind = ExperimentSpec::Kind::comparison;
  MethodRuns runs;
  runs.method = method.tag();
  runs.traces.push_back(run_single(inst, method, schedule, run_seed, passes));
  result.references.push_back(runs.traces.front().min_objective());
  runs.summary = summarize_quantiles(runs.traces, result.references);
  result.methods.push_back(std::move(runs));
  for (const auto& path : write_experiment(result, out_dir)) out << path.string() << '\n';
  return 0;
}

int cmd_diagnose(const InstanceFlags& flags, const std::vector<std::string>& method_tags,
                 std::size_t probes, const std::string& out_dir, std::ostream& out) {
  const auto inst = generate_instance(flags.n, flags.d, flags.design_spec(),
                                      NoiseSpec::parse(flags.noise), flags.seed);
  CsvTable table{{"check", "kind", "probes", "worst_margin", "pass"}, {}};
  bool all_pass = true;
  auto add = [&](const std::string& check, const ModelKind& kind, double margin, double tol) {
    const bool pass = margin >= -tol;
    all_pass = all_pass && pass;
    table.rows.push_back({check, kind.tag(), std::to_string(probes), format_double(margin),
                          pass ? "1" : "0"});
  };
  std::uint64_t stream = 0;
  for (const auto& tag : method_tags) {
    const ModelKind kind = ModelKind::parse(tag);
    const auto gm = check_gradmap_bound(inst, kind, probes, Rng::derive_seed(flags.seed, ++stream));
    add("gradmap_bound", kind, gm.worst_margin, kMarginTolerance);
    const auto mc =
        check_model_conditions(inst, kind, probes, 0.1, Rng::derive_seed(flags.seed, ++stream));
    add("model_equality", kind, -mc.equality_error, kEqualityTolerance);
    add("model_convexity", kind, mc.convexity_slack, kMarginTolerance);
    add("model_subgradient", kind, mc.subgradient_slack, kMarginTolerance);
    add("model_lower_bound", kind, mc.lower_bound_slack, kMarginTolerance);
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir, ec.message());
  const auto path = std::filesystem::path(out_dir) / "diagnostics.csv";
  write_csv(path, table);
  out << path.string() << '\n';
  if (!all_pass) out << "some diagnostics failed their tolerance\n";
  return all_pass ? 0 : 1;
}

}  // namespace

std::vector<std::string> config_to_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::vector<std::string> args;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    line = trimmed(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError(path + ":" + std::to_string(number) + ": expected key=value");
    std::string key = trimmed(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key = key.substr(2);
    // A repeated key overrides the earlier line.
    const std::string prefix = "--" + key + "=";
    std::erase_if(args, [&](const std::string& a) { return a.rfind(prefix, 0) == 0; });
    args.push_back(prefix + trimmed(line.substr(eq + 1)));
  }
  return args;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stochastic model-based methods for robust phase retrieval", "stochopt"};
  app.require_subcommand(1);

  InstanceFlags gen_flags, run_flags, exp_flags, diag_flags;
  std::string gen_out, run_out, exp_out, diag_out, sum_in, sum_out, run_instance;

  auto* generate = app.add_subcommand("generate", "Generate a phase-retrieval instance");
  gen_flags.add_to(*generate);
  generate->add_option("--out", gen_out, "Output directory")->required();

  auto* run = app.add_subcommand("run", "Run one seeded stochastic method");
  run_flags.add_to(*run);
  std::string run_method = "proxlin";
  std::optional<double> run_alpha0, run_beta;
  std::size_t run_passes = 200;
  run->add_option("--instance", run_instance, "Load the instance from a generate directory");
  run->add_option("--method", run_method, "sgm, proxlin, proxpt or guarded:EPS")->capture_default_str();
  run->add_option("--alpha0", run_alpha0, "Initial stepsize (tuned when omitted)");
  run->add_option("--beta", run_beta, "Stepsize power in [0.5, 1]");
  run->add_option("--passes", run_passes, "Passes over the data")->capture_default_str();
  run->add_option("--out", run_out, "Output directory")->required();

  auto* experiment = app.add_subcommand("experiment", "Run an experiment suite (accepts --config FILE)");
  exp_flags.add_to(*experiment);
  std::string exp_kind = "comparison", exp_id;
  std::vector<std::string> exp_methods;
  std::optional<double> exp_alpha0, exp_beta;
  std::size_t exp_reps = 100, exp_passes = 200, exp_threads = 0;
  double exp_eps = 1e-2, exp_baseline_alpha = 0.0;
  bool exp_baseline = true;
  std::vector<double> exp_grid_alpha0, exp_grid_beta;
  experiment->add_option("--kind", exp_kind, "comparison, conditioning or stepsize_grid")
      ->capture_default_str();
  experiment->add_option("--id", exp_id, "Experiment id written to the CSVs (default: kind)");
  experiment->add_option("--method", exp_methods, "Methods (repeat or comma-separate)")
      ->delimiter(',');
  experiment->add_option("--alpha0", exp_alpha0, "Fixed initial stepsize (disables tuning)");
  experiment->add_option("--beta", exp_beta, "Fixed stepsize power (disables tuning)");
  experiment->add_option("--reps", exp_reps, "Replications")->capture_default_str();
  experiment->add_option("--passes", exp_passes, "Passes over the data")->capture_default_str();
  experiment->add_option("--eps", exp_eps, "Accuracy for T(eps)")->capture_default_str();
  experiment->add_option("--baseline", exp_baseline, "Include the deterministic prox-linear baseline")
      ->capture_default_str();
  experiment->add_option("--baseline-alpha", exp_baseline_alpha, "Baseline stepsize (0 = n / (2 ||A||^2))")
      ->capture_default_str();
  experiment->add_option("--grid-alpha0", exp_grid_alpha0, "Stepsize-grid alpha0 values")
      ->delimiter(',');
  experiment->add_option("--grid-beta", exp_grid_beta, "Stepsize-grid beta values")->delimiter(',');
  experiment->add_option("--threads", exp_threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  experiment->add_option("--out", exp_out, "Output directory")->required();
  // Handled before parsing; declared so it shows in --help.
  experiment->add_option("--config", "Flat key=value file mirroring these flags");

  auto* diagnose = app.add_subcommand("diagnose", "Fuzz the gradient-mapping bound and model conditions");
  diag_flags.n = 100;
  diag_flags.d = 10;
  diag_flags.add_to(*diagnose);
  std::vector<std::string> diag_methods{"sgm", "proxlin", "proxpt", "guarded:1"};
  std::size_t diag_probes = 1000;
  diagnose->add_option("--method", diag_methods, "Model kinds to check")->delimiter(',');
  diagnose->add_option("--probes", diag_probes, "Probes per check")->capture_default_str();
  diagnose->add_option("--out", diag_out, "Output directory")->required();

  auto* summarize = app.add_subcommand("summarize", "Quantile summary of a traces.csv");
  summarize->add_option("--in", sum_in, "Input traces.csv")->required();
  summarize->add_option("--out", sum_out, "Output summary.csv")->required();

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (generate->parsed()) return cmd_generate(gen_flags, gen_out, out);
    if (run->parsed())
      return cmd_run(run_flags, run_instance, run_method, run_alpha0, run_beta, run_passes, run_out,
                     out);
    if (experiment->parsed()) {
      ExperimentSpec spec = ExperimentSpec::defaults(ExperimentSpec::parse_kind(exp_kind));
      spec.id = exp_id.empty() ? ExperimentSpec::kind_name(spec.kind) : exp_id;
      spec.n = exp_flags.n;
      spec.d = exp_flags.d;
      spec.design = exp_flags.design_spec();
      spec.noise = NoiseSpec::parse(exp_flags.noise);
      spec.master_seed = exp_flags.seed;
      if (!exp_methods.empty()) {
        spec.methods.clear();
        for (const auto& tag : exp_methods) spec.methods.push_back(ModelKind::parse(tag));
      }
      spec.replications = exp_reps;
      spec.budget_passes = exp_passes;
      spec.epsilon = exp_eps;
      spec.threads = exp_threads;
      if (spec.kind != ExperimentSpec::Kind::stepsize_grid) {
        spec.include_baseline = exp_baseline;
        spec.baseline_alpha = exp_baseline_alpha;
      }
      if (exp_alpha0 || exp_beta) {
        if (!(exp_alpha0 && exp_beta))
          throw ValidationError("--alpha0 and --beta must be given together");
        spec.tune = false;
        spec.fixed_schedule = {*exp_alpha0, *exp_beta};
        spec.fixed_schedule.validate();
      }
      if (!exp_grid_alpha0.empty()) spec.grid_alpha0 = exp_grid_alpha0;
      if (!exp_grid_beta.empty()) spec.grid_beta = exp_grid_beta;
      for (const auto& path : run_experiment(spec, exp_out)) out << path.string() << '\n';
      return 0;
    }
    if (diagnose->parsed()) return cmd_diagnose(diag_flags, diag_methods, diag_probes, diag_out, out);
    if (summarize->parsed()) {
      write_csv(sum_out, summarize_traces_table(read_csv(sum_in)));
      out << sum_out << '\n';
      return 0;
    }
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace stochopt
