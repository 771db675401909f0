#include "repbandit/repucb.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "repbandit/errors.hpp"

namespace repbandit {

namespace {

long long ceil_log2(long long x) {
  if (x <= 1) return 0;
  return std::bit_width(static_cast<std::uint64_t>(x - 1));
}

}  // namespace

long long call_budget(int num_arms, long long horizon) {
  if (num_arms < 1 || horizon < 1) {
    throw InputError("call_budget: need K >= 1 and T >= 1");
  }
  return static_cast<long long>(num_arms) * (1 + ceil_log2(horizon));
}

RepUcbBudget budget_for(int num_arms, long long horizon, double rho) {
  if (horizon < num_arms) {
    throw ConfigError("budget_for: horizon must be at least the arm count");
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw ConfigError("budget_for: rho must lie in (0,1)");
  }
  RepUcbBudget b;
  b.M = call_budget(num_arms, horizon);
  b.rho = rho;
  b.rho1 = rho / static_cast<double>(b.M);
  b.delta1 = 1.0 / (2.0 * static_cast<double>(b.M) *
                    static_cast<double>(horizon));
  if (b.delta1 > b.rho1 / 4.0) {
    throw ConfigError(
        "budget_for: infeasible budget, violates delta1 <= rho1/4 "
        "(delta1 = " + std::to_string(b.delta1) +
        ", rho1/4 = " + std::to_string(b.rho1 / 4.0) + ")");
  }
  return b;
}

int select_arm(std::span<const ArmState> arms) {
  if (arms.empty()) {
    throw InputError("select_arm: no arms");
  }
  int best = 0;
  for (int a = 1; a < static_cast<int>(arms.size()); ++a) {
    if (arms[static_cast<std::size_t>(a)].index >
        arms[static_cast<std::size_t>(best)].index) {
      best = a;
    }
  }
  return best + 1;
}

long long batch_length(long long count, long long t, long long horizon) {
  if (t < 1 || t > horizon || count < 1) {
    throw InputError("batch_length: invalid arguments");
  }
  return std::min(count, horizon - t + 1);
}

MabTrajectory repucb_run(const MabInstance& inst, long long horizon,
                         double rho, const StreamHandle& shared,
                         StreamHandle& env, const MeanOracle& oracle) {
  inst.validate();
  const int num_arms = inst.num_arms();
  const RepUcbBudget budget = budget_for(num_arms, horizon, rho);
  const RepMeanParams params(budget.delta1, budget.rho1);

  MabTrajectory traj;
  traj.actions.reserve(static_cast<std::size_t>(horizon));
  traj.rewards.reserve(static_cast<std::size_t>(horizon));

  std::vector<ArmState> arms(static_cast<std::size_t>(num_arms));
  std::vector<long long> calls_made(static_cast<std::size_t>(num_arms), 0);
  const StreamHandle shift_root = shared.child("repmean");

  auto estimate_arm = [&](int arm) {
    ArmState& st = arms[static_cast<std::size_t>(arm - 1)];
    const long long call = calls_made[static_cast<std::size_t>(arm - 1)]++;
    double value;
    if (oracle) {
      value = oracle(arm, call, st.samples);
    } else {
      value = rep_mean(st.samples, params,
                       shift_root.child(static_cast<std::uint64_t>(arm))
                           .child(static_cast<std::uint64_t>(call)));
    }
    st.estimate = value;
    st.radius = tau_schedule(st.count, params);
    st.index = st.estimate + 2.0 * st.radius;
    traj.mean_calls.push_back({arm, st.count, value, st.radius});
  };

  auto play = [&](int arm) {
    const double r = mab_sample_reward(inst, arm, env);
    traj.actions.push_back(arm);
    traj.rewards.push_back(r);
    arms[static_cast<std::size_t>(arm - 1)].samples.push_back(r);
  };

  // Round-robin initialization: one pull and one estimate per arm.
  for (int arm = 1; arm <= num_arms; ++arm) {
    play(arm);
    arms[static_cast<std::size_t>(arm - 1)].count = 1;
    estimate_arm(arm);
  }

  long long t = num_arms + 1;
  while (t <= horizon) {
    const int arm = select_arm(arms);
    ArmState& st = arms[static_cast<std::size_t>(arm - 1)];
    const long long batch = batch_length(st.count, t, horizon);
    for (long long j = 0; j < batch; ++j) {
      play(arm);
    }
    st.count += batch;
    t += batch;
    estimate_arm(arm);
  }

  traj.final_counts.reserve(static_cast<std::size_t>(num_arms));
  for (const auto& st : arms) {
    traj.final_counts.push_back(st.count);
  }
  return traj;
}

MabTrajectory plain_ucb_run(const MabInstance& inst, long long horizon,
                            StreamHandle& env) {
  inst.validate();
  const int num_arms = inst.num_arms();
  if (horizon < num_arms) {
    throw ConfigError("plain_ucb_run: horizon must be at least the arm count");
  }

  MabTrajectory traj;
  traj.actions.reserve(static_cast<std::size_t>(horizon));
  traj.rewards.reserve(static_cast<std::size_t>(horizon));
  std::vector<double> sums(static_cast<std::size_t>(num_arms), 0.0);
  std::vector<long long> counts(static_cast<std::size_t>(num_arms), 0);

  auto play = [&](int arm) {
    const double r = mab_sample_reward(inst, arm, env);
    traj.actions.push_back(arm);
    traj.rewards.push_back(r);
    sums[static_cast<std::size_t>(arm - 1)] += r;
    counts[static_cast<std::size_t>(arm - 1)] += 1;
  };

  for (int arm = 1; arm <= num_arms && arm <= horizon; ++arm) {
    play(arm);
  }
  for (long long t = num_arms + 1; t <= horizon; ++t) {
    int best = 1;
    double best_index = -1.0;
    for (int arm = 1; arm <= num_arms; ++arm) {
      const std::size_t i = static_cast<std::size_t>(arm - 1);
      const double index =
          sums[i] / static_cast<double>(counts[i]) +
          std::sqrt(2.0 * std::log(static_cast<double>(t)) /
                    static_cast<double>(counts[i]));
      if (index > best_index) {
        best_index = index;
        best = arm;
      }
    }
    play(best);
  }

  traj.final_counts = counts;
  return traj;
}

}  // namespace repbandit
