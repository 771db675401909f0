#include "repbandit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "repbandit/errors.hpp"

namespace repbandit {

WilsonInterval wilson95(long long successes, long long trials) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw InputError("wilson95: invalid counts");
  }
  constexpr double z = 1.96;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = p + z2 / (2.0 * n);
  const double margin =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {(center - margin) / denom, (center + margin) / denom};
}

namespace {

template <typename Actions>
std::optional<long long> first_divergence(const Actions& a, const Actions& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return static_cast<long long>(i) + 1;
  }
  if (a.size() != b.size()) return static_cast<long long>(n) + 1;
  return std::nullopt;
}

void append_suffixed(std::vector<DiagnosticCheck>& out,
                     std::vector<DiagnosticCheck> checks, const char* suffix) {
  for (auto& c : checks) {
    c.name += suffix;
    out.push_back(std::move(c));
  }
}

}  // namespace

PairedRunReport run_paired_mab(MabAlgorithm alg, const MabInstance& inst,
                               long long horizon, double rho,
                               const SeedPlan& plan, long long trial_id,
                               const PairedRunOptions& opts) {
  PairedStreams streams = paired_streams(plan, trial_id);
  StreamHandle env_b = opts.reuse_env_for_b ? streams.env_a : streams.env_b;

  auto run = [&](StreamHandle& env) {
    switch (alg) {
      case MabAlgorithm::kRepUcb:
        return repucb_run(inst, horizon, rho, streams.shared, env,
                          opts.mean_oracle);
      case MabAlgorithm::kPlainUcb:
        return plain_ucb_run(inst, horizon, env);
    }
    throw InputError("run_paired_mab: unknown algorithm");
  };
  const MabTrajectory traj_a = run(streams.env_a);
  const MabTrajectory traj_b = run(env_b);

  PairedRunReport report;
  report.trial_id = trial_id;
  report.first_divergence_round =
      first_divergence(traj_a.actions, traj_b.actions);
  report.match = !report.first_divergence_round.has_value();

  const std::vector<double> regret_a = compute_regret(traj_a, inst);
  const std::vector<double> regret_b = compute_regret(traj_b, inst);
  report.regret_a = regret_a.empty() ? 0.0 : regret_a.back();
  report.regret_b = regret_b.empty() ? 0.0 : regret_b.back();
  if (opts.record_regret_series) {
    report.regret_series_a = regret_a;
    report.regret_series_b = regret_b;
  }
  if (alg == MabAlgorithm::kRepUcb) {
    append_suffixed(report.diagnostics,
                    diagnostic_suite(traj_a, inst, horizon, rho), "/a");
    append_suffixed(report.diagnostics,
                    diagnostic_suite(traj_b, inst, horizon, rho), "/b");
  }
  return report;
}

PairedRunReport run_paired_lin(LinAlgorithm alg, const LinearInstance& inst,
                               long long horizon, double delta, double rho,
                               double lambda, const SeedPlan& plan,
                               long long trial_id,
                               const PairedRunOptions& opts) {
  PairedStreams streams = paired_streams(plan, trial_id);
  StreamHandle env_b = opts.reuse_env_for_b ? streams.env_a : streams.env_b;

  auto run = [&](StreamHandle& env) {
    switch (alg) {
      case LinAlgorithm::kRepLinUcb:
        return replinucb_run(inst, horizon, delta, rho, lambda, streams.shared,
                             env, opts.ridge_oracle);
      case LinAlgorithm::kPlainLinUcb:
        return plain_linucb_run(inst, horizon, delta, lambda, env);
    }
    throw InputError("run_paired_lin: unknown algorithm");
  };
  const LinTrajectory traj_a = run(streams.env_a);
  const LinTrajectory traj_b = run(env_b);

  PairedRunReport report;
  report.trial_id = trial_id;
  // Oblivious schedules make index and vector comparison equivalent; indices
  // are exact, so they decide. Vectors are cross-checked where indices agree.
  report.first_divergence_round =
      first_divergence(traj_a.action_indices, traj_b.action_indices);
  report.match = !report.first_divergence_round.has_value();

  const std::vector<double> regret_a = compute_regret(traj_a, inst);
  const std::vector<double> regret_b = compute_regret(traj_b, inst);
  report.regret_a = regret_a.empty() ? 0.0 : regret_a.back();
  report.regret_b = regret_b.empty() ? 0.0 : regret_b.back();
  if (opts.record_regret_series) {
    report.regret_series_a = regret_a;
    report.regret_series_b = regret_b;
  }
  report.batch_count_a = static_cast<int>(traj_a.batch_starts.size());
  report.batch_count_b = static_cast<int>(traj_b.batch_starts.size());
  for (std::size_t i = 1; i < traj_a.batch_starts.size(); ++i) {
    report.trigger_rounds_a.push_back(traj_a.batch_starts[i]);
  }
  report.elliptical_a = std::accumulate(traj_a.potential_terms.begin(),
                                        traj_a.potential_terms.end(), 0.0);
  report.elliptical_b = std::accumulate(traj_b.potential_terms.begin(),
                                        traj_b.potential_terms.end(), 0.0);
  if (alg == LinAlgorithm::kRepLinUcb) {
    append_suffixed(report.diagnostics,
                    diagnostic_suite(traj_a, inst, horizon, delta, rho, lambda),
                    "/a");
    append_suffixed(report.diagnostics,
                    diagnostic_suite(traj_b, inst, horizon, delta, rho, lambda),
                    "/b");
  }
  return report;
}

ReplicabilitySummary estimate_replicability(
    const std::vector<PairedRunReport>& reports, double rho) {
  if (reports.empty()) {
    throw InputError("estimate_replicability: no reports");
  }
  ReplicabilitySummary summary;
  summary.trials = static_cast<long long>(reports.size());
  for (const auto& r : reports) {
    if (r.match) ++summary.matches;
  }
  summary.rate = static_cast<double>(summary.matches) /
                 static_cast<double>(summary.trials);
  const WilsonInterval ci = wilson95(summary.matches, summary.trials);
  summary.wilson_lo = ci.lo;
  summary.wilson_hi = ci.hi;
  summary.target = 1.0 - rho;
  return summary;
}

namespace {

// Type-7 quantile (linear interpolation), matching common defaults.
double quantile_sorted(const std::vector<double>& sorted, double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

RegretCurve regret_curve(const std::vector<std::vector<double>>& series) {
  if (series.empty()) {
    throw InputError("regret_curve: no series");
  }
  const std::size_t horizon = series.front().size();
  for (const auto& s : series) {
    if (s.size() != horizon) {
      throw InputError("regret_curve: horizon mismatch across runs");
    }
  }
  RegretCurve curve;
  curve.mean.resize(horizon);
  curve.p10.resize(horizon);
  curve.p90.resize(horizon);
  std::vector<double> column(series.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    double acc = 0.0;
    for (std::size_t r = 0; r < series.size(); ++r) {
      column[r] = series[r][t];
      acc += column[r];
    }
    std::sort(column.begin(), column.end());
    curve.mean[t] = acc / static_cast<double>(series.size());
    curve.p10[t] = quantile_sorted(column, 0.10);
    curve.p90[t] = quantile_sorted(column, 0.90);
  }
  return curve;
}

std::vector<DiagnosticCheck> diagnostic_suite(const MabTrajectory& traj,
                                              const MabInstance& inst,
                                              long long horizon, double rho) {
  if (traj.actions.empty() || traj.mean_calls.empty() ||
      traj.final_counts.empty()) {
    throw InputError("diagnostic_suite: trajectory lacks mean-call records");
  }
  const RepUcbBudget budget = budget_for(inst.num_arms(), horizon, rho);
  std::vector<DiagnosticCheck> checks;

  const double calls = static_cast<double>(traj.mean_calls.size());
  checks.push_back({"repmean_calls", calls, static_cast<double>(budget.M),
                    calls <= static_cast<double>(budget.M)});

  long long prefix_mismatches = 0;
  for (int arm = 1; arm <= inst.num_arms(); ++arm) {
    if (traj.actions[static_cast<std::size_t>(arm - 1)] != arm) {
      ++prefix_mismatches;
    }
  }
  checks.push_back({"round_robin_prefix",
                    static_cast<double>(prefix_mismatches), 0.0,
                    prefix_mismatches == 0});

  bool all_accurate = true;
  for (const auto& call : traj.mean_calls) {
    const double mu =
        inst.arm_means[static_cast<std::size_t>(call.arm - 1)];
    if (std::abs(call.estimate - mu) > call.radius) {
      all_accurate = false;
      break;
    }
  }
  checks.push_back({"all_calls_tau_accurate", all_accurate ? 0.0 : 1.0, 0.0,
                    all_accurate});

  // Suboptimal-pull bound N_a(T) <= 1 + 2*H_a, meaningful on accurate runs.
  const double log_term = std::log(1.0 / budget.delta1);
  const double diff = budget.rho1 - budget.delta1;
  for (int arm = 1; arm <= inst.num_arms(); ++arm) {
    const double gap = inst.gap(arm);
    if (gap <= 0.0) continue;
    const double h_a = 9.0 * kCMeanEst * log_term / (diff * diff * gap * gap);
    const double pulls = static_cast<double>(
        traj.final_counts[static_cast<std::size_t>(arm - 1)]);
    checks.push_back({"suboptimal_pulls_arm" + std::to_string(arm), pulls,
                      1.0 + 2.0 * h_a, pulls <= 1.0 + 2.0 * h_a});
  }
  return checks;
}

std::vector<DiagnosticCheck> diagnostic_suite(const LinTrajectory& traj,
                                              const LinearInstance& inst,
                                              long long horizon, double delta,
                                              double rho, double lambda) {
  if (traj.actions.empty() || traj.potential_terms.empty() ||
      traj.batch_starts.empty() || traj.log_det_before.empty()) {
    throw InputError("diagnostic_suite: trajectory lacks per-round records");
  }
  const int d = inst.dim();
  const BatchPlan plan =
      batch_params(d, horizon, inst.L, lambda, delta, rho);
  std::vector<DiagnosticCheck> checks;

  const double potential = std::accumulate(traj.potential_terms.begin(),
                                           traj.potential_terms.end(), 0.0);
  const double potential_bound =
      2.0 * static_cast<double>(d) *
      std::log(1.0 + static_cast<double>(horizon) * inst.L * inst.L /
                         (lambda * static_cast<double>(d)));
  checks.push_back({"elliptical_potential", potential, potential_bound,
                    potential <= potential_bound});

  const double batches = static_cast<double>(traj.batch_starts.size());
  checks.push_back({"batch_count", batches, static_cast<double>(plan.B),
                    batches <= static_cast<double>(plan.B)});

  // det(V_t) <= q * det(V_{t_b}) at action time for every batch that is not
  // the final allowed one; evaluated on the same log-dets the trigger used.
  double worst_excess = 0.0;
  const double log_q = std::log(plan.q);
  for (std::size_t t = 0; t < traj.log_det_before.size(); ++t) {
    const int b = traj.batch_index[t];
    if (b >= plan.B - 1) continue;
    const double excess =
        traj.log_det_before[t] -
        (log_q + traj.batch_log_det_start[static_cast<std::size_t>(b)]);
    worst_excess = std::max(worst_excess, excess);
  }
  checks.push_back({"within_batch_det_growth", worst_excess, 0.0,
                    worst_excess <= 0.0});

  // Realized non-final transitions must each have grown past q.
  bool growth_ok = true;
  for (std::size_t b = 0; b + 1 < traj.batch_starts.size(); ++b) {
    const double start = traj.batch_log_det_start[b];
    const double next = traj.batch_log_det_start[b + 1];
    if (!(next > log_q + start)) {
      growth_ok = false;
      break;
    }
  }
  checks.push_back({"trigger_det_growth", growth_ok ? 0.0 : 1.0, 0.0,
                    growth_ok});
  return checks;
}

}  // namespace repbandit
