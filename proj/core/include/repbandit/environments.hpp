#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "repbandit/randomness.hpp"

namespace repbandit {

enum class MabNoise { kBernoulli, kTruncatedGaussian };

/// K-armed bandit instance with rewards supported on [0,1].
struct MabInstance {
  std::vector<double> arm_means;  // one mean per arm, each in [0,1]
  MabNoise noise = MabNoise::kBernoulli;
  double noise_scale = 0.1;  // truncated-gaussian std dev before clamping

  int num_arms() const { return static_cast<int>(arm_means.size()); }
  double best_mean() const;
  /// Suboptimality gap of a 1-based arm.
  double gap(int arm) const;
  /// Throws InputError if any mean lies outside [0,1] or there are no arms.
  void validate() const;
};

enum class ActionScheduleKind { kFixed, kSphere };

/// Linear bandit instance. Action sets are finite (m vectors of norm <= L)
/// and the schedule is a pure function of (schedule_seed, t), fixed before
/// either run plays anything.
struct LinearInstance {
  Eigen::VectorXd theta_star;  // ||theta_star|| <= S
  double sigma = 0.1;          // sub-Gaussian noise scale
  double S = 1.0;              // parameter norm bound
  double L = 1.0;              // action norm bound
  int num_actions = 8;         // m, actions per round
  ActionScheduleKind schedule = ActionScheduleKind::kFixed;
  std::uint64_t schedule_seed = 0;

  int dim() const { return static_cast<int>(theta_star.size()); }
  void validate() const;
};

/// One reward draw for a 1-based arm; consumes exactly one stream value.
double mab_sample_reward(const MabInstance& inst, int arm, StreamHandle& env);

/// <action, theta*> + Gaussian(0, sigma^2); consumes one stream value.
double lin_sample_reward(const LinearInstance& inst,
                         const Eigen::VectorXd& action, StreamHandle& env);

/// Action set at round t (1-based). Same list, same order, every call.
std::vector<Eigen::VectorXd> action_set_at(const LinearInstance& inst, int t);

/// Per-call record of the replicable mean estimator inside a MAB run.
struct MeanCallRecord {
  int arm = 0;            // 1-based
  long long n = 0;        // sample count at the call
  double estimate = 0.0;  // returned value
  double radius = 0.0;    // accuracy radius tau(n) paired with the call
};

struct MabTrajectory {
  std::vector<int> actions;  // 1-based arm indices, length T
  std::vector<double> rewards;
  std::vector<MeanCallRecord> mean_calls;
  std::vector<long long> final_counts;  // pulls per arm at horizon
};

struct LinTrajectory {
  std::vector<int> action_indices;  // index into the round's action set
  std::vector<Eigen::VectorXd> actions;
  std::vector<double> rewards;
  // Diagnostics recorded as the run proceeds.
  std::vector<int> batch_starts;           // rounds t_b, 1-based
  std::vector<double> batch_beta;          // beta_b per batch
  std::vector<double> batch_beta_inflated; // beta_b * (1 + d/(rho_b-2delta_b))
  std::vector<double> batch_log_det_start; // ln det V_{t_b}
  std::vector<int> batch_index;            // batch id per round
  std::vector<double> log_det_before;      // ln det V_t at action time
  std::vector<double> potential_terms;     // min(1, ||a_t||^2_{V_t^-1})
};

/// Cumulative realized regret; entry t is the sum of gaps of actions 1..t.
std::vector<double> compute_regret(const MabTrajectory& traj,
                                   const MabInstance& inst);
std::vector<double> compute_regret(const LinTrajectory& traj,
                                   const LinearInstance& inst);

}  // namespace repbandit
