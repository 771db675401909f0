#pragma once

#include <functional>
#include <span>
#include <vector>

#include "repbandit/environments.hpp"
#include "repbandit/randomness.hpp"
#include "repbandit/repmean.hpp"

namespace repbandit {

/// Total mean-estimation calls the batched UCB can make: K*(1+ceil(log2 T)).
long long call_budget(int num_arms, long long horizon);

/// Per-call budgets derived from the total replicability budget rho.
struct RepUcbBudget {
  long long M = 0;     // call budget K*(1+ceil(log2 T))
  double rho = 0.0;    // total replicability budget
  double rho1 = 0.0;   // rho / M
  double delta1 = 0.0; // 1 / (2*M*T)
};

/// Throws ConfigError naming the violated inequality when delta1 > rho1/4.
RepUcbBudget budget_for(int num_arms, long long horizon, double rho);

/// Per-arm state between estimator calls.
struct ArmState {
  std::vector<double> samples;
  long long count = 0;
  double estimate = 0.0;
  double radius = 0.0;
  double index = 0.0;  // estimate + 2*radius
};

/// Smallest 1-based index among maximizers of the optimistic index.
int select_arm(std::span<const ArmState> arms);

/// min(count, horizon - t + 1); the batch the selected arm plays.
long long batch_length(long long count, long long t, long long horizon);

/// Replacement oracle for the replicable mean estimator, used to test the
/// conditional-identity property. Receives the 1-based arm, the per-arm call
/// index, and the current sample set.
using MeanOracle =
    std::function<double(int arm, long long call_index,
                         std::span<const double> samples)>;

/// Batched optimistic run: round-robin initialization, then repeatedly play
/// the argmax-index arm for a batch equal to its current count and recompute
/// only that arm's replicable estimate. The estimator's shift for call m of
/// arm a is read from shared.child("repmean").child(a).child(m).
MabTrajectory repucb_run(const MabInstance& inst, long long horizon,
                         double rho, const StreamHandle& shared,
                         StreamHandle& env,
                         const MeanOracle& oracle = nullptr);

/// UCB1 baseline: per-round empirical means, same smallest-index tie-break.
MabTrajectory plain_ucb_run(const MabInstance& inst, long long horizon,
                            StreamHandle& env);

}  // namespace repbandit
