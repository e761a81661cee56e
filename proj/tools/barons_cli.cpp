// barons: run experiments, property suites, and parameter schedules.
//
//   barons run --config FILE [--set section.key=value]... [--seed N] [--jobs N] [--seeds 1,2,3]
//   barons check SUITE [--seed N] [--trials N]
//   barons params (--local-b B | --euclidean-G G [--R R]) --nu NU [--M M] --T T [--c-inv K] [--strict]
//
// Exit codes: 0 success, 1 failed check or runtime error, 2 configuration or
// usage error, 3 divergence.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "barons/checks.hpp"
#include "barons/config.hpp"
#include "barons/errors.hpp"
#include "barons/harness.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct RunArgs {
  std::vector<std::string> configs;
  std::vector<std::string> overrides;
  std::optional<long> T;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> output;
  int jobs = 1;
};

struct CheckArgs {
  std::string suite;
  std::uint64_t seed = 1;
  int trials = 100;
};

struct ParamsArgs {
  std::optional<double> local_b;
  std::optional<double> euclidean_G;
  double R = 1.0;
  double nu = 1.0;
  double M = 1.0;
  long T = 0;
  std::optional<double> c_inv;
  bool strict = false;
};

std::string with_seed_suffix(const std::string& path, std::uint64_t seed) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const std::string tag = "_seed" + std::to_string(seed);
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + tag;
  return path.substr(0, dot) + tag + path.substr(dot);
}

barons::RunConfig load_run_config(const RunArgs& args) {
  barons::RunConfig cfg;
  for (const auto& path : args.configs) barons::apply_config_file(cfg, path);
  for (const auto& o : args.overrides) barons::apply_override(cfg, o);
  if (const char* env = std::getenv("BARONS_SEED"); env && *env) {
    barons::set_config_value(cfg, "run", "seed", env);
  }
  if (args.T) cfg.T = *args.T;
  if (args.seed) cfg.seed = *args.seed;
  if (args.output) cfg.output = *args.output;
  barons::validate(cfg);
  return cfg;
}

struct JobOutcome {
  int code = 0;
  std::string line;
};

JobOutcome run_one(const barons::RunConfig& cfg) {
  JobOutcome out;
  try {
    barons::ExperimentResult res = barons::run_experiment(cfg);
    const double regret = barons::summarize(res, cfg);
    barons::write_csv(res.trace, cfg.output);
    char buf[256];
    std::snprintf(buf, sizeof buf, "final_regret=%.10g landmark_updates=%ld max_local_norm=%.10g", regret,
                  res.landmark_updates, res.max_local_norm);
    out.line = buf;
  } catch (const barons::ConfigError& e) {
    out.code = kExitConfig;
    out.line = std::string("config error [") + e.key() + "]: " + e.what();
  } catch (const barons::PreconditionViolated& e) {
    out.code = kExitConfig;
    out.line = e.what();
  } catch (const barons::DivergenceDetected& e) {
    out.code = kExitDivergence;
    out.line = std::string("divergence: ") + e.what();
  } catch (const std::exception& e) {
    out.code = kExitFailure;
    out.line = std::string("error: ") + e.what();
  }
  return out;
}

int cmd_run(const RunArgs& args) {
  barons::RunConfig base;
  try {
    base = load_run_config(args);
  } catch (const barons::ConfigError& e) {
    std::cerr << "config error [" << e.key() << "]: " << e.what() << '\n';
    return kExitConfig;
  }

  std::vector<barons::RunConfig> jobs;
  if (args.seeds.empty()) {
    jobs.push_back(base);
  } else {
    for (std::uint64_t s : args.seeds) {
      barons::RunConfig cfg = base;
      cfg.seed = s;
      cfg.output = with_seed_suffix(base.output, s);
      jobs.push_back(std::move(cfg));
    }
  }

  std::vector<JobOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) outcomes[i] = run_one(jobs[i]);
  };
  const int n_threads = std::max(1, std::min<int>(args.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  int code = 0;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::string prefix = jobs.size() > 1 ? "seed=" + std::to_string(jobs[i].seed) + " " : "";
    if (outcomes[i].code == 0) {
      std::cout << prefix << outcomes[i].line << '\n';
    } else {
      std::cerr << prefix << outcomes[i].line << '\n';
      code = std::max(code, outcomes[i].code);
    }
  }
  return code;
}

int cmd_check(const CheckArgs& args) {
  if (!barons::is_check_suite(args.suite)) {
    std::cerr << "unknown check suite '" << args.suite << "'; available:";
    for (const auto& s : barons::check_suites()) std::cerr << ' ' << s;
    std::cerr << '\n';
    return kExitConfig;
  }
  const barons::CheckReport rep = barons::run_check(args.suite, args.seed, args.trials);
  for (const auto& c : rep.counts) {
    std::cout << args.suite << ": " << c.name << ": " << c.passed << '/' << (c.passed + c.failed) << " pass\n";
  }
  std::cout << args.suite << ": worst lhs - rhs = " << rep.worst_gap << '\n';
  if (rep.ok()) return 0;
  std::cout << "first counterexample: " << rep.first_counterexample << '\n';
  return kExitFailure;
}

int cmd_params(const ParamsArgs& args) {
  if (args.local_b.has_value() == args.euclidean_G.has_value()) {
    std::cerr << "params: give exactly one of --local-b or --euclidean-G\n";
    return kExitConfig;
  }
  if (args.T < 2) {
    std::cerr << "params: --T must be at least 2\n";
    return kExitConfig;
  }
  const double c = args.c_inv ? 1.0 / *args.c_inv : 1.0 / static_cast<double>(args.T);
  barons::GradientBound bound;
  if (args.local_b) bound = barons::LocalNormBound{*args.local_b};
  else bound = barons::EuclideanBound{*args.euclidean_G, args.R};

  barons::BaronsParams p;
  try {
    p = barons::compute_params({args.M, args.nu}, bound, args.T, c, barons::Mode::Practical);
  } catch (const barons::Error& e) {
    std::cerr << "params: " << e.what() << '\n';
    return kExitConfig;
  }
  std::printf("eta=%.8g\neps=%.8g\nm_newton=%d\nlandmark_threshold=%.8g\nlambda_target=%.8g\n", p.eta, p.eps,
              p.m_newton, p.landmark_threshold, p.lambda_target);
  if (p.warnings.empty()) {
    std::printf("preconditions=ok\n");
    return 0;
  }
  if (args.strict) {
    for (const auto& w : p.warnings) std::printf("PreconditionViolated: %s\n", w.c_str());
    return kExitFailure;
  }
  for (const auto& w : p.warnings) std::printf("precondition_warning: %s\n", w.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Barrier-regularized online Newton steps: experiments, checks and schedules"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write its trace CSV");
  run_cmd->add_option("--config", run.configs, "Config file (repeatable, later files override)")->required();
  run_cmd->add_option("--set", run.overrides, "Override one entry: section.key=value (repeatable)");
  run_cmd->add_option("--T", run.T, "Number of rounds");
  run_cmd->add_option("--seed", run.seed, "Loss generator seed (overrides BARONS_SEED and the config)");
  run_cmd->add_option("--seeds", run.seeds, "Run one job per seed; outputs get a _seedN suffix")->delimiter(',');
  run_cmd->add_option("--output", run.output, "Trace CSV path");
  run_cmd->add_option("--jobs", run.jobs, "Parallel jobs for --seeds")->check(CLI::PositiveNumber);

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "Run a randomized property suite");
  check_cmd->add_option("suite", check.suite, "Suite name")->required();
  check_cmd->add_option("--seed", check.seed, "Random seed");
  check_cmd->add_option("--trials", check.trials, "Number of trials")->check(CLI::PositiveNumber);

  ParamsArgs params;
  auto* params_cmd = app.add_subcommand("params", "Print the step-size and tolerance schedule");
  params_cmd->add_option("--local-b", params.local_b, "Local-norm gradient bound b");
  params_cmd->add_option("--euclidean-G", params.euclidean_G, "Euclidean gradient bound G");
  params_cmd->add_option("--R", params.R, "Domain radius for the Euclidean bound");
  params_cmd->add_option("--nu", params.nu, "Barrier parameter")->required();
  params_cmd->add_option("--M", params.M, "Self-concordance constant");
  params_cmd->add_option("--T", params.T, "Horizon")->required();
  params_cmd->add_option("--c-inv", params.c_inv, "1/c for the comparator shrink (default T)");
  params_cmd->add_flag("--strict", params.strict, "Treat violated step-size preconditions as errors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (run_cmd->parsed()) return cmd_run(run);
  if (check_cmd->parsed()) return cmd_check(check);
  return cmd_params(params);
}
