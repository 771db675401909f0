#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "repbandit/environments.hpp"
#include "repbandit/randomness.hpp"
#include "repbandit/repridge.hpp"

namespace repbandit {

/// Batch budget and per-batch confidence/replicability splits.
struct BatchPlan {
  int B = 0;          // batch budget ceil(d * ln(1 + T L^2 / (lambda d)))
  double q = 0.0;     // determinant growth factor (1 + T L^2/(lambda d))^(d/B)
  double delta_b = 0.0;  // delta / B
  double rho_b = 0.0;    // rho / B
};

/// Throws ConfigError unless rho in (3*delta, 1).
BatchPlan batch_params(int dim, long long horizon, double L, double lambda,
                       double delta, double rho);

/// beta * (1 + d/(rho_b - 2*delta_b)); ConfigError when rho_b <= 2*delta_b.
double inflated_radius(double beta, int dim, double rho_b, double delta_b);

/// True iff batch may still split (b <= B-2) and det_now > q * det_start.
/// The final batch never triggers.
bool det_trigger(double det_now, double det_batch_start, double q, int b,
                 int B);
/// Same comparison on log-determinants: log_det_now > ln(q) + log_det_start.
bool det_trigger_log(double log_det_now, double log_det_batch_start, double q,
                     int b, int B);

/// Frozen per-batch policy: the replicable estimate, the inflated radius, and
/// the batch-start Gram matrix whose factorization scores actions all batch.
struct BatchState {
  int index = 0;
  long long start_round = 0;
  Eigen::VectorXd theta_tilde;
  double beta = 0.0;
  double beta_inflated = 0.0;
  double log_det_start = 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt_start;
};

/// Smallest-index maximizer of <a, theta_tilde> + beta_inflated *
/// ||a||_{V_{t_b}^{-1}}, scored with the batch-start matrix.
int select_action(const std::vector<Eigen::VectorXd>& actions,
                  const BatchState& batch);

/// Replacement oracle for the batch-start estimator (conditional-identity
/// tests). Receives the batch index and the running sufficient statistics.
using RidgeOracle =
    std::function<Eigen::VectorXd(int batch_index, const GramState& gram)>;

/// Batched optimistic linear bandit run. At each batch start the replicable
/// ridge estimate is computed on the full history with per-batch budgets
/// (delta/B, rho/B) and shift stream shared.child("batch").child(b); a new
/// batch opens when det(V) grows past q times its batch-start value.
LinTrajectory replinucb_run(const LinearInstance& inst, long long horizon,
                            double delta, double rho, double lambda,
                            const StreamHandle& shared, StreamHandle& env,
                            const RidgeOracle& oracle = nullptr);

/// Per-round ridge + confidence-radius baseline (no rounding, no batching).
LinTrajectory plain_linucb_run(const LinearInstance& inst, long long horizon,
                               double delta, double lambda, StreamHandle& env);

}  // namespace repbandit
