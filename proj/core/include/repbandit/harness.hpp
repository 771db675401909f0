#pragma once

#include <optional>
#include <string>
#include <vector>

#include "repbandit/environments.hpp"
#include "repbandit/randomness.hpp"
#include "repbandit/replinucb.hpp"
#include "repbandit/repucb.hpp"

namespace repbandit {

/// One evaluated inequality: pass iff lhs <= rhs.
struct DiagnosticCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// Result of running one trial twice with shared internal randomness and
/// independent environment noise.
struct PairedRunReport {
  long long trial_id = 0;
  bool match = false;
  std::optional<long long> first_divergence_round;  // 1-based
  double regret_a = 0.0;
  double regret_b = 0.0;
  std::vector<DiagnosticCheck> diagnostics;  // both runs, names suffixed /a /b
  std::vector<double> regret_series_a;
  std::vector<double> regret_series_b;
  // Linear runs only.
  int batch_count_a = 0;
  int batch_count_b = 0;
  std::vector<int> trigger_rounds_a;
  double elliptical_a = 0.0;
  double elliptical_b = 0.0;
};

struct ReplicabilitySummary {
  long long trials = 0;
  long long matches = 0;
  double rate = 0.0;
  double wilson_lo = 0.0;
  double wilson_hi = 0.0;
  double target = 0.0;  // 1 - rho
};

struct WilsonInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// 95% Wilson score interval (z = 1.96) for a binomial proportion.
WilsonInterval wilson95(long long successes, long long trials);

enum class MabAlgorithm { kRepUcb, kPlainUcb };
enum class LinAlgorithm { kRepLinUcb, kPlainLinUcb };

struct PairedRunOptions {
  bool reuse_env_for_b = false;  // determinism smoke: run B sees run A's noise
  MeanOracle mean_oracle;        // optional estimator stub (MAB)
  RidgeOracle ridge_oracle;      // optional estimator stub (linear)
  bool record_regret_series = false;
};

PairedRunReport run_paired_mab(MabAlgorithm alg, const MabInstance& inst,
                               long long horizon, double rho,
                               const SeedPlan& plan, long long trial_id,
                               const PairedRunOptions& opts = {});

PairedRunReport run_paired_lin(LinAlgorithm alg, const LinearInstance& inst,
                               long long horizon, double delta, double rho,
                               double lambda, const SeedPlan& plan,
                               long long trial_id,
                               const PairedRunOptions& opts = {});

ReplicabilitySummary estimate_replicability(
    const std::vector<PairedRunReport>& reports, double rho);

/// Pointwise mean and 10/90 percentiles of cumulative regret across runs.
struct RegretCurve {
  std::vector<double> mean;
  std::vector<double> p10;
  std::vector<double> p90;
};

RegretCurve regret_curve(const std::vector<std::vector<double>>& series);

/// Structural inequality checks for one trajectory.
std::vector<DiagnosticCheck> diagnostic_suite(const MabTrajectory& traj,
                                              const MabInstance& inst,
                                              long long horizon, double rho);
std::vector<DiagnosticCheck> diagnostic_suite(const LinTrajectory& traj,
                                              const LinearInstance& inst,
                                              long long horizon, double delta,
                                              double rho, double lambda);

}  // namespace repbandit
