#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "repbandit/environments.hpp"
#include "repbandit/harness.hpp"

namespace repbandit {

/// Fully resolved experiment description. Parameter-regime checks run in
/// validate() before any trial starts.
struct ExperimentConfig {
  std::string algorithm;  // repucb | plain_ucb | replinucb | plain_linucb
  long long horizon = 0;  // T
  double rho = 0.0;
  double delta = 0.0;   // linear algorithms only
  double lambda = 1.0;  // ridge regularization, linear algorithms only
  long long trials = 0;
  std::uint64_t master_seed = 0;
  std::string experiment_id = "default";
  int workers = 1;
  std::variant<MabInstance, LinearInstance> instance;

  bool is_linear() const {
    return algorithm == "replinucb" || algorithm == "plain_linucb";
  }
  void validate() const;
};

/// Parse a JSON config document; throws ConfigError naming the bad field.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Runs all paired trials and writes summary.json, regret.csv and trials.csv
/// (plus batches.csv for linear runs) into out_dir. Worker count only
/// schedules trials; outputs are byte-identical for any value.
void run_mab_experiment(const ExperimentConfig& config,
                        const std::filesystem::path& out_dir);
void run_linbandit_experiment(const ExperimentConfig& config,
                              const std::filesystem::path& out_dir);

/// One statistic of a Monte Carlo self-test suite with its pass threshold.
struct SuiteCheck {
  std::string name;
  double observed = 0.0;
  double threshold = 0.0;
  bool upper_bound = false;  // pass means observed <= threshold
  bool pass = false;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
};

struct SuiteResult {
  std::vector<SuiteCheck> checks;
  bool pass() const;
  std::string to_string() const;
};

struct RepMeanSuiteConfig {
  double mu = 0.5;  // Bernoulli mean
  double rho1 = 0.2;
  double delta1 = 0.01;
  double tau = 0.2;  // accuracy target; n comes from the sample bound
  long long trials = 2000;
  std::uint64_t seed = 47;
};

/// Accuracy (|estimate - mu| <= tau beyond delta1 plus Wilson margin) and
/// paired-run match rate (at least 1 - rho1 minus Wilson margin).
SuiteResult repmean_suite(const RepMeanSuiteConfig& config = {});

struct RepRidgeSuiteConfig {
  int dim = 3;
  long long samples = 200;  // fixed-design size
  double sigma = 0.1;
  double lambda = 1.0;
  double S = 1.0;
  double delta = 0.05;
  double rho = 0.3;
  long long trials = 1000;
  std::uint64_t seed = 99;
  double match_slack = 0.03;  // slack on the Wilson lower bound
};

/// Paired-run match rate (Wilson lower bound >= 1 - rho - slack) and V-norm
/// coverage at the inflated radius (failures <= delta plus Wilson margin).
SuiteResult repridge_suite(const RepRidgeSuiteConfig& config = {});

/// Shortest representation of a double that parses back to the same value.
std::string format_double(double value);

}  // namespace repbandit
