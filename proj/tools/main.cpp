#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "repbandit/errors.hpp"
#include "repbandit/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSuiteFailure = 3;

struct RunArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string out_dir = ".";
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config (JSON)")
      ->required();
  cmd->add_option("--seed", args.seed, "Override master_seed (decimal u64)");
  cmd->add_option("--workers", args.workers, "Worker thread count");
  cmd->add_option("--out", args.out_dir, "Output directory");
}

repbandit::ExperimentConfig resolve(const RunArgs& args) {
  repbandit::ExperimentConfig config = repbandit::load_config(args.config_path);
  if (args.seed) config.master_seed = *args.seed;
  if (args.workers) config.workers = *args.workers;
  config.validate();
  return config;
}

int run_check(const std::string& which) {
  repbandit::SuiteResult result;
  if (which == "repmean") {
    result = repbandit::repmean_suite();
  } else if (which == "repridge") {
    result = repbandit::repridge_suite();
  } else {
    throw repbandit::ConfigError("check: unknown suite '" + which +
                                 "' (expected repmean or repridge)");
  }
  std::cout << result.to_string();
  return result.pass() ? kExitOk : kExitSuiteFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replicable bandit simulation experiments"};
  app.require_subcommand(1);

  RunArgs mab_args;
  CLI::App* mab = app.add_subcommand("mab", "Paired-run K-armed experiment");
  add_run_options(mab, mab_args);

  RunArgs lin_args;
  CLI::App* linbandit =
      app.add_subcommand("linbandit", "Paired-run linear bandit experiment");
  add_run_options(linbandit, lin_args);

  std::string check_suite;
  CLI::App* check =
      app.add_subcommand("check", "Run a module Monte Carlo self-test");
  check->add_option("suite", check_suite, "repmean or repridge")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (mab->parsed()) {
      const auto config = resolve(mab_args);
      if (config.is_linear()) {
        throw repbandit::ConfigError(
            "mab: config names a linear algorithm; use linbandit");
      }
      repbandit::run_mab_experiment(config, mab_args.out_dir);
      std::cout << "wrote summary.json, regret.csv, trials.csv to "
                << mab_args.out_dir << '\n';
      return kExitOk;
    }
    if (linbandit->parsed()) {
      const auto config = resolve(lin_args);
      if (!config.is_linear()) {
        throw repbandit::ConfigError(
            "linbandit: config names a MAB algorithm; use mab");
      }
      repbandit::run_linbandit_experiment(config, lin_args.out_dir);
      std::cout << "wrote summary.json, regret.csv, trials.csv, batches.csv to "
                << lin_args.out_dir << '\n';
      return kExitOk;
    }
    if (check->parsed()) {
      return run_check(check_suite);
    }
  } catch (const repbandit::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const repbandit::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitConfig;
}
