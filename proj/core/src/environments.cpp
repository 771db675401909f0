#include "repbandit/environments.hpp"

#include <algorithm>
#include <cmath>

#include "repbandit/errors.hpp"

namespace repbandit {

double MabInstance::best_mean() const {
  return *std::max_element(arm_means.begin(), arm_means.end());
}

double MabInstance::gap(int arm) const {
  return best_mean() - arm_means.at(static_cast<std::size_t>(arm - 1));
}

void MabInstance::validate() const {
  if (arm_means.empty()) {
    throw InputError("MabInstance: at least one arm required");
  }
  for (double mu : arm_means) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw InputError("MabInstance: arm means must lie in [0,1]");
    }
  }
  if (noise == MabNoise::kTruncatedGaussian && !(noise_scale > 0.0)) {
    throw InputError("MabInstance: truncated-gaussian scale must be > 0");
  }
}

void LinearInstance::validate() const {
  if (theta_star.size() == 0) {
    throw InputError("LinearInstance: dimension must be >= 1");
  }
  if (theta_star.norm() > S * (1.0 + 1e-12)) {
    throw InputError("LinearInstance: ||theta_star|| exceeds S");
  }
  if (!(sigma >= 0.0) || !(S >= 0.0) || !(L > 0.0)) {
    throw InputError("LinearInstance: sigma, S must be >= 0 and L > 0");
  }
  if (num_actions < 1) {
    throw InputError("LinearInstance: need at least one action per round");
  }
}

double mab_sample_reward(const MabInstance& inst, int arm, StreamHandle& env) {
  if (arm < 1 || arm > inst.num_arms()) {
    throw InputError("mab_sample_reward: arm index out of range");
  }
  const double mu = inst.arm_means[static_cast<std::size_t>(arm - 1)];
  switch (inst.noise) {
    case MabNoise::kBernoulli:
      return env.next_uniform() < mu ? 1.0 : 0.0;
    case MabNoise::kTruncatedGaussian:
      return std::clamp(mu + inst.noise_scale * env.next_gaussian(), 0.0, 1.0);
  }
  throw InputError("mab_sample_reward: unknown noise kind");
}

double lin_sample_reward(const LinearInstance& inst,
                         const Eigen::VectorXd& action, StreamHandle& env) {
  if (action.size() != inst.theta_star.size()) {
    throw InputError("lin_sample_reward: action dimension mismatch");
  }
  if (action.norm() > inst.L * (1.0 + 1e-9)) {
    throw InputError("lin_sample_reward: action norm exceeds L");
  }
  return action.dot(inst.theta_star) + inst.sigma * env.next_gaussian();
}

namespace {

std::vector<Eigen::VectorXd> sphere_actions(const LinearInstance& inst,
                                            StreamHandle stream) {
  const int d = inst.dim();
  std::vector<Eigen::VectorXd> actions;
  actions.reserve(static_cast<std::size_t>(inst.num_actions));
  for (int j = 0; j < inst.num_actions; ++j) {
    Eigen::VectorXd a(d);
    for (int i = 0; i < d; ++i) a[i] = stream.next_gaussian();
    const double norm = a.norm();
    if (norm < 1e-12) {
      a.setZero();
      a[0] = 1.0;
      actions.push_back(inst.L * a);
    } else {
      actions.push_back((inst.L / norm) * a);
    }
  }
  return actions;
}

}  // namespace

std::vector<Eigen::VectorXd> action_set_at(const LinearInstance& inst, int t) {
  if (t < 1) {
    throw InputError("action_set_at: round index must be >= 1");
  }
  StreamHandle root = StreamHandle::from_key(inst.schedule_seed);
  switch (inst.schedule) {
    case ActionScheduleKind::kFixed:
      return sphere_actions(inst, root.child("actions").child(std::uint64_t{0}));
    case ActionScheduleKind::kSphere:
      return sphere_actions(
          inst, root.child("actions").child(static_cast<std::uint64_t>(t)));
  }
  throw InputError("action_set_at: unknown schedule kind");
}

std::vector<double> compute_regret(const MabTrajectory& traj,
                                   const MabInstance& inst) {
  std::vector<double> out;
  out.reserve(traj.actions.size());
  double acc = 0.0;
  for (int arm : traj.actions) {
    acc += inst.gap(arm);
    out.push_back(acc);
  }
  return out;
}

std::vector<double> compute_regret(const LinTrajectory& traj,
                                   const LinearInstance& inst) {
  std::vector<double> out;
  out.reserve(traj.actions.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < traj.actions.size(); ++i) {
    const auto actions = action_set_at(inst, static_cast<int>(i) + 1);
    double best = actions.front().dot(inst.theta_star);
    for (const auto& a : actions) {
      best = std::max(best, a.dot(inst.theta_star));
    }
    acc += best - traj.actions[i].dot(inst.theta_star);
    out.push_back(acc);
  }
  return out;
}

}  // namespace repbandit
