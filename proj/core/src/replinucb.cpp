#include "repbandit/replinucb.hpp"

#include <cmath>

#include "repbandit/errors.hpp"

namespace repbandit {

BatchPlan batch_params(int dim, long long horizon, double L, double lambda,
                       double delta, double rho) {
  if (dim < 1 || horizon < 1) {
    throw InputError("batch_params: need d >= 1 and T >= 1");
  }
  if (!(L > 0.0 && lambda > 0.0)) {
    throw InputError("batch_params: L and lambda must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("batch_params: delta must lie in (0,1)");
  }
  if (!(rho > 3.0 * delta && rho < 1.0)) {
    throw ConfigError("batch_params: requires rho in (3*delta, 1)");
  }
  const double d = static_cast<double>(dim);
  const double growth =
      1.0 + static_cast<double>(horizon) * L * L / (lambda * d);
  BatchPlan plan;
  plan.B = static_cast<int>(std::ceil(d * std::log(growth)));
  plan.q = std::pow(growth, d / static_cast<double>(plan.B));
  plan.delta_b = delta / static_cast<double>(plan.B);
  plan.rho_b = rho / static_cast<double>(plan.B);
  return plan;
}

double inflated_radius(double beta, int dim, double rho_b, double delta_b) {
  if (dim < 1) {
    throw InputError("inflated_radius: dimension must be >= 1");
  }
  if (!(rho_b > 2.0 * delta_b)) {
    throw ConfigError("inflated_radius: requires rho_b > 2*delta_b");
  }
  return beta * (1.0 + static_cast<double>(dim) / (rho_b - 2.0 * delta_b));
}

bool det_trigger_log(double log_det_now, double log_det_batch_start, double q,
                     int b, int B) {
  return b <= B - 2 && log_det_now > std::log(q) + log_det_batch_start;
}

bool det_trigger(double det_now, double det_batch_start, double q, int b,
                 int B) {
  if (!(det_now > 0.0 && det_batch_start > 0.0)) {
    throw InputError("det_trigger: determinants must be positive");
  }
  return det_trigger_log(std::log(det_now), std::log(det_batch_start), q, b, B);
}

int select_action(const std::vector<Eigen::VectorXd>& actions,
                  const BatchState& batch) {
  if (actions.empty()) {
    throw InputError("select_action: empty action set");
  }
  int best = 0;
  double best_score = 0.0;
  for (int i = 0; i < static_cast<int>(actions.size()); ++i) {
    const Eigen::VectorXd& a = actions[static_cast<std::size_t>(i)];
    const double norm_sq = a.dot(batch.llt_start.solve(a));
    const double score =
        a.dot(batch.theta_tilde) + batch.beta_inflated * std::sqrt(norm_sq);
    if (i == 0 || score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

LinTrajectory replinucb_run(const LinearInstance& inst, long long horizon,
                            double delta, double rho, double lambda,
                            const StreamHandle& shared, StreamHandle& env,
                            const RidgeOracle& oracle) {
  inst.validate();
  const int d = inst.dim();
  const BatchPlan plan =
      batch_params(d, horizon, inst.L, lambda, delta, rho);
  const StreamHandle shift_root = shared.child("batch");

  GramState gram(d, lambda);
  BatchState batch;
  LinTrajectory traj;
  traj.action_indices.reserve(static_cast<std::size_t>(horizon));

  auto open_batch = [&](int index, long long start_round) {
    batch.index = index;
    batch.start_round = start_round;
    if (oracle) {
      batch.theta_tilde = oracle(index, gram);
    } else {
      RepRidgeParams params{plan.delta_b, plan.rho_b, inst.sigma, inst.S};
      batch.theta_tilde =
          rep_ridge(gram, params,
                    shift_root.child(static_cast<std::uint64_t>(index)))
              .theta_tilde;
    }
    batch.beta = beta_radius(gram, plan.delta_b, inst.sigma, inst.S);
    batch.beta_inflated =
        inflated_radius(batch.beta, d, plan.rho_b, plan.delta_b);
    batch.log_det_start = gram.log_det();
    batch.llt_start.compute(gram.V());
    traj.batch_starts.push_back(static_cast<int>(start_round));
    traj.batch_beta.push_back(batch.beta);
    traj.batch_beta_inflated.push_back(batch.beta_inflated);
    traj.batch_log_det_start.push_back(batch.log_det_start);
  };

  open_batch(0, 1);
  for (long long t = 1; t <= horizon; ++t) {
    const auto actions = action_set_at(inst, static_cast<int>(t));
    const int chosen = select_action(actions, batch);
    const Eigen::VectorXd& a = actions[static_cast<std::size_t>(chosen)];

    traj.batch_index.push_back(batch.index);
    traj.log_det_before.push_back(gram.log_det());
    traj.potential_terms.push_back(std::min(1.0, gram.inv_quad_form(a)));

    const double reward = lin_sample_reward(inst, a, env);
    traj.action_indices.push_back(chosen);
    traj.actions.push_back(a);
    traj.rewards.push_back(reward);

    gram.update(a, reward);
    if (t < horizon && det_trigger_log(gram.log_det(), batch.log_det_start,
                                       plan.q, batch.index, plan.B)) {
      open_batch(batch.index + 1, t + 1);
    }
  }
  return traj;
}

LinTrajectory plain_linucb_run(const LinearInstance& inst, long long horizon,
                               double delta, double lambda,
                               StreamHandle& env) {
  inst.validate();
  const int d = inst.dim();
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("plain_linucb_run: delta must lie in (0,1)");
  }
  GramState gram(d, lambda);
  LinTrajectory traj;
  traj.action_indices.reserve(static_cast<std::size_t>(horizon));

  for (long long t = 1; t <= horizon; ++t) {
    const auto actions = action_set_at(inst, static_cast<int>(t));
    const Eigen::VectorXd theta = ridge_fit(gram);
    const double beta = beta_radius(gram, delta, inst.sigma, inst.S);
    int best = 0;
    double best_score = 0.0;
    for (int i = 0; i < static_cast<int>(actions.size()); ++i) {
      const Eigen::VectorXd& a = actions[static_cast<std::size_t>(i)];
      const double score =
          a.dot(theta) + beta * std::sqrt(gram.inv_quad_form(a));
      if (i == 0 || score > best_score) {
        best_score = score;
        best = i;
      }
    }
    const Eigen::VectorXd& a = actions[static_cast<std::size_t>(best)];
    traj.potential_terms.push_back(std::min(1.0, gram.inv_quad_form(a)));
    traj.log_det_before.push_back(gram.log_det());

    const double reward = lin_sample_reward(inst, a, env);
    traj.action_indices.push_back(best);
    traj.actions.push_back(a);
    traj.rewards.push_back(reward);
    gram.update(a, reward);
  }
  return traj;
}

}  // namespace repbandit
