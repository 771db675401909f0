#include "repbandit/experiments.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "repbandit/errors.hpp"
#include "repbandit/repmean.hpp"
#include "repbandit/repridge.hpp"
#include "repbandit/repucb.hpp"

namespace repbandit {

using nlohmann::json;

std::string format_double(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

void ExperimentConfig::validate() const {
  if (algorithm != "repucb" && algorithm != "plain_ucb" &&
      algorithm != "replinucb" && algorithm != "plain_linucb") {
    throw ConfigError("config: unknown algorithm '" + algorithm + "'");
  }
  if (trials < 1) {
    throw ConfigError("config: trials must be >= 1");
  }
  if (horizon < 1) {
    throw ConfigError("config: T must be >= 1");
  }
  if (workers < 1) {
    throw ConfigError("config: workers must be >= 1");
  }
  if (is_linear()) {
    const auto* inst = std::get_if<LinearInstance>(&instance);
    if (inst == nullptr) {
      throw ConfigError("config: linear algorithm needs a linear instance");
    }
    try {
      inst->validate();
    } catch (const InputError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(lambda > 0.0)) {
      throw ConfigError("config: lambda must be positive");
    }
    if (algorithm == "replinucb") {
      batch_params(inst->dim(), horizon, inst->L, lambda, delta, rho);
    } else if (!(delta > 0.0 && delta < 1.0)) {
      throw ConfigError("config: delta must lie in (0,1)");
    }
  } else {
    const auto* inst = std::get_if<MabInstance>(&instance);
    if (inst == nullptr) {
      throw ConfigError("config: MAB algorithm needs a MAB instance");
    }
    try {
      inst->validate();
    } catch (const InputError& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
    if (horizon < inst->num_arms()) {
      throw ConfigError("config: T must be at least the arm count");
    }
    if (algorithm == "repucb") {
      budget_for(inst->num_arms(), horizon, rho);
    }
  }
}

namespace {

MabInstance parse_mab_instance(const json& j) {
  MabInstance inst;
  if (!j.contains("arm_means") || !j["arm_means"].is_array()) {
    throw ConfigError("config: instance.arm_means must be an array");
  }
  inst.arm_means = j["arm_means"].get<std::vector<double>>();
  const std::string noise = j.value("noise", std::string("bernoulli"));
  if (noise == "bernoulli") {
    inst.noise = MabNoise::kBernoulli;
  } else if (noise == "truncated_gaussian") {
    inst.noise = MabNoise::kTruncatedGaussian;
  } else {
    throw ConfigError("config: instance.noise must be 'bernoulli' or "
                      "'truncated_gaussian'");
  }
  inst.noise_scale = j.value("noise_scale", 0.1);
  return inst;
}

LinearInstance parse_linear_instance(const json& j) {
  LinearInstance inst;
  inst.sigma = j.value("sigma", 0.1);
  inst.S = j.value("S", 1.0);
  inst.L = j.value("L", 1.0);
  inst.num_actions = j.value("m", 8);
  inst.schedule_seed = j.value("schedule_seed", std::uint64_t{0});
  const std::string schedule = j.value("schedule", std::string("fixed"));
  if (schedule == "fixed") {
    inst.schedule = ActionScheduleKind::kFixed;
  } else if (schedule == "sphere") {
    inst.schedule = ActionScheduleKind::kSphere;
  } else {
    throw ConfigError("config: instance.schedule must be 'fixed' or 'sphere'");
  }
  if (j.contains("theta_star")) {
    const auto values = j["theta_star"].get<std::vector<double>>();
    inst.theta_star =
        Eigen::Map<const Eigen::VectorXd>(values.data(),
                                          static_cast<Eigen::Index>(values.size()));
  } else if (j.contains("theta_seed") && j.contains("d")) {
    const int d = j["d"].get<int>();
    if (d < 1) throw ConfigError("config: instance.d must be >= 1");
    StreamHandle s =
        StreamHandle::from_key(j["theta_seed"].get<std::uint64_t>())
            .child("theta");
    Eigen::VectorXd theta(d);
    for (int i = 0; i < d; ++i) theta[i] = s.next_gaussian();
    const double norm = theta.norm();
    inst.theta_star = norm > 0.0 ? Eigen::VectorXd(inst.S / norm * theta)
                                 : Eigen::VectorXd::Unit(d, 0) * inst.S;
  } else {
    throw ConfigError(
        "config: instance needs theta_star or (theta_seed and d)");
  }
  if (j.contains("d") &&
      j["d"].get<int>() != static_cast<int>(inst.theta_star.size())) {
    throw ConfigError("config: instance.d disagrees with theta_star length");
  }
  return inst;
}

json instance_to_json(const MabInstance& inst) {
  json j;
  j["arm_means"] = inst.arm_means;
  j["noise"] = inst.noise == MabNoise::kBernoulli ? "bernoulli"
                                                  : "truncated_gaussian";
  if (inst.noise == MabNoise::kTruncatedGaussian) {
    j["noise_scale"] = inst.noise_scale;
  }
  return j;
}

json instance_to_json(const LinearInstance& inst) {
  json j;
  j["d"] = inst.dim();
  j["theta_star"] = std::vector<double>(
      inst.theta_star.data(), inst.theta_star.data() + inst.theta_star.size());
  j["sigma"] = inst.sigma;
  j["S"] = inst.S;
  j["L"] = inst.L;
  j["m"] = inst.num_actions;
  j["schedule"] =
      inst.schedule == ActionScheduleKind::kFixed ? "fixed" : "sphere";
  j["schedule_seed"] = inst.schedule_seed;
  return j;
}

json config_to_json(const ExperimentConfig& config) {
  json j;
  j["algorithm"] = config.algorithm;
  j["T"] = config.horizon;
  j["trials"] = config.trials;
  j["master_seed"] = config.master_seed;
  j["experiment_id"] = config.experiment_id;
  j["workers"] = config.workers;
  if (config.is_linear()) {
    j["rho"] = config.rho;
    j["delta"] = config.delta;
    j["lambda"] = config.lambda;
    j["instance"] = instance_to_json(std::get<LinearInstance>(config.instance));
  } else {
    if (config.algorithm == "repucb") j["rho"] = config.rho;
    j["instance"] = instance_to_json(std::get<MabInstance>(config.instance));
  }
  return j;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  ExperimentConfig config;
  try {
    config.algorithm = j.at("algorithm").get<std::string>();
    config.horizon = j.at("T").get<long long>();
    config.trials = j.at("trials").get<long long>();
    config.master_seed = j.value("master_seed", std::uint64_t{0});
    config.experiment_id = j.value("experiment_id", std::string("default"));
    config.workers = j.value("workers", 1);
    config.rho = j.value("rho", 0.0);
    config.delta = j.value("delta", 0.0);
    config.lambda = j.value("lambda", 1.0);
    const json& inst = j.at("instance");
    if (config.is_linear()) {
      config.instance = parse_linear_instance(inst);
    } else {
      config.instance = parse_mab_instance(inst);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  config.validate();
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

namespace {

std::vector<PairedRunReport> run_trials(
    const ExperimentConfig& config,
    const std::function<PairedRunReport(long long)>& one_trial) {
  std::vector<PairedRunReport> reports(
      static_cast<std::size_t>(config.trials));
  const int workers =
      static_cast<int>(std::min<long long>(config.workers, config.trials));
  if (workers <= 1) {
    for (long long t = 0; t < config.trials; ++t) {
      reports[static_cast<std::size_t>(t)] = one_trial(t);
    }
    return reports;
  }
  std::atomic<long long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const long long t = next.fetch_add(1);
      if (t >= config.trials) return;
      try {
        reports[static_cast<std::size_t>(t)] = one_trial(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
  if (error) std::rethrow_exception(error);
  return reports;
}

void write_regret_csv(const std::filesystem::path& path,
                      const std::vector<PairedRunReport>& reports) {
  std::vector<std::vector<double>> series;
  series.reserve(2 * reports.size());
  for (const auto& r : reports) {
    series.push_back(r.regret_series_a);
    series.push_back(r.regret_series_b);
  }
  const RegretCurve curve = regret_curve(series);
  std::ofstream out(path);
  out << "round,mean_regret,p10,p90\n";
  for (std::size_t t = 0; t < curve.mean.size(); ++t) {
    out << (t + 1) << ',' << format_double(curve.mean[t]) << ','
        << format_double(curve.p10[t]) << ',' << format_double(curve.p90[t])
        << '\n';
  }
}

void write_trials_csv(const std::filesystem::path& path,
                      const std::vector<PairedRunReport>& reports,
                      bool linear) {
  std::ofstream out(path);
  out << "trial_id,match,first_divergence_round,regret_a,regret_b";
  if (linear) out << ",elliptical_potential";
  out << '\n';
  for (const auto& r : reports) {
    out << r.trial_id << ',' << (r.match ? 1 : 0) << ',';
    if (r.first_divergence_round) out << *r.first_divergence_round;
    out << ',' << format_double(r.regret_a) << ','
        << format_double(r.regret_b);
    if (linear) out << ',' << format_double(r.elliptical_a);
    out << '\n';
  }
}

void write_batches_csv(const std::filesystem::path& path,
                       const std::vector<PairedRunReport>& reports) {
  std::ofstream out(path);
  out << "trial_id,batch_count,trigger_rounds\n";
  for (const auto& r : reports) {
    out << r.trial_id << ',' << r.batch_count_a << ',';
    for (std::size_t i = 0; i < r.trigger_rounds_a.size(); ++i) {
      if (i > 0) out << ';';
      out << r.trigger_rounds_a[i];
    }
    out << '\n';
  }
}

struct DiagnosticTally {
  long long evaluated = 0;
  long long passed = 0;
};

void write_summary_json(const std::filesystem::path& path,
                        const ExperimentConfig& config,
                        const std::vector<PairedRunReport>& reports) {
  const ReplicabilitySummary summary =
      estimate_replicability(reports, config.rho);
  // Aggregate diagnostics per inequality, both runs pooled.
  std::map<std::string, DiagnosticTally> tally;
  for (const auto& r : reports) {
    for (const auto& check : r.diagnostics) {
      std::string base = check.name;
      if (base.size() > 2 && (base.ends_with("/a") || base.ends_with("/b"))) {
        base.resize(base.size() - 2);
      }
      auto& t = tally[base];
      ++t.evaluated;
      if (check.pass) ++t.passed;
    }
  }
  json j;
  j["config"] = config_to_json(config);
  j["summary"] = {{"trials", summary.trials},
                  {"matches", summary.matches},
                  {"rate", summary.rate},
                  {"wilson_lo", summary.wilson_lo},
                  {"wilson_hi", summary.wilson_hi},
                  {"target", summary.target}};
  json diagnostics = json::object();
  for (const auto& [name, t] : tally) {
    diagnostics[name] = {
        {"evaluated", t.evaluated},
        {"passed", t.passed},
        {"pass_rate",
         static_cast<double>(t.passed) / static_cast<double>(t.evaluated)}};
  }
  j["diagnostics"] = diagnostics;
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

}  // namespace

void run_mab_experiment(const ExperimentConfig& config,
                        const std::filesystem::path& out_dir) {
  config.validate();
  if (config.is_linear()) {
    throw ConfigError("run_mab_experiment: config names a linear algorithm");
  }
  const MabInstance inst = std::get<MabInstance>(config.instance);
  const MabAlgorithm alg = config.algorithm == "repucb"
                               ? MabAlgorithm::kRepUcb
                               : MabAlgorithm::kPlainUcb;
  const SeedPlan plan{config.master_seed, config.experiment_id};
  PairedRunOptions opts;
  opts.record_regret_series = true;
  const auto reports = run_trials(config, [&](long long trial) {
    return run_paired_mab(alg, inst, config.horizon, config.rho, plan, trial,
                          opts);
  });
  std::filesystem::create_directories(out_dir);
  write_summary_json(out_dir / "summary.json", config, reports);
  write_regret_csv(out_dir / "regret.csv", reports);
  write_trials_csv(out_dir / "trials.csv", reports, /*linear=*/false);
}

void run_linbandit_experiment(const ExperimentConfig& config,
                              const std::filesystem::path& out_dir) {
  config.validate();
  if (!config.is_linear()) {
    throw ConfigError("run_linbandit_experiment: config names a MAB algorithm");
  }
  const LinearInstance inst = std::get<LinearInstance>(config.instance);
  const LinAlgorithm alg = config.algorithm == "replinucb"
                               ? LinAlgorithm::kRepLinUcb
                               : LinAlgorithm::kPlainLinUcb;
  const SeedPlan plan{config.master_seed, config.experiment_id};
  PairedRunOptions opts;
  opts.record_regret_series = true;
  const auto reports = run_trials(config, [&](long long trial) {
    return run_paired_lin(alg, inst, config.horizon, config.delta, config.rho,
                          config.lambda, plan, trial, opts);
  });
  std::filesystem::create_directories(out_dir);
  write_summary_json(out_dir / "summary.json", config, reports);
  write_regret_csv(out_dir / "regret.csv", reports);
  write_trials_csv(out_dir / "trials.csv", reports, /*linear=*/true);
  write_batches_csv(out_dir / "batches.csv", reports);
}

bool SuiteResult::pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string SuiteResult::to_string() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " observed="
        << format_double(c.observed) << " (wilson "
        << format_double(c.wilson_lo) << ".." << format_double(c.wilson_hi)
        << ") " << (c.upper_bound ? "<=" : ">=") << " "
        << format_double(c.threshold) << '\n';
  }
  return out.str();
}

SuiteResult repmean_suite(const RepMeanSuiteConfig& config) {
  const RepMeanParams params(config.delta1, config.rho1);
  const double diff = config.rho1 - config.delta1;
  const long long n = static_cast<long long>(
      std::ceil(kCMeanEst * std::log(1.0 / config.delta1) /
                (config.tau * config.tau * diff * diff)));

  const SeedPlan plan{config.seed, "repmean-check"};
  long long matches = 0;
  long long accuracy_failures = 0;
  std::vector<double> samples(static_cast<std::size_t>(n));
  const MabInstance coin{{config.mu}, MabNoise::kBernoulli, 0.1};
  for (long long trial = 0; trial < config.trials; ++trial) {
    PairedStreams streams = paired_streams(plan, trial);
    const StreamHandle shift =
        streams.shared.child("repmean").child(std::uint64_t{0});
    double estimates[2];
    StreamHandle* envs[2] = {&streams.env_a, &streams.env_b};
    for (int run = 0; run < 2; ++run) {
      for (auto& s : samples) {
        s = mab_sample_reward(coin, 1, *envs[run]);
      }
      estimates[run] = rep_mean(samples, params, shift);
      if (std::abs(estimates[run] - config.mu) > config.tau) {
        ++accuracy_failures;
      }
    }
    if (estimates[0] == estimates[1]) ++matches;
  }

  SuiteResult result;
  {
    const long long observations = 2 * config.trials;
    const WilsonInterval ci = wilson95(accuracy_failures, observations);
    SuiteCheck check;
    check.name = "accuracy_failure_rate";
    check.observed = static_cast<double>(accuracy_failures) /
                     static_cast<double>(observations);
    check.wilson_lo = ci.lo;
    check.wilson_hi = ci.hi;
    check.upper_bound = true;
    check.threshold = config.delta1 + (ci.hi - ci.lo) / 2.0;
    check.pass = check.observed <= check.threshold;
    result.checks.push_back(check);
  }
  {
    const WilsonInterval ci = wilson95(matches, config.trials);
    SuiteCheck check;
    check.name = "paired_match_rate";
    check.observed =
        static_cast<double>(matches) / static_cast<double>(config.trials);
    check.wilson_lo = ci.lo;
    check.wilson_hi = ci.hi;
    check.upper_bound = false;
    check.threshold = 1.0 - config.rho1 - (ci.hi - ci.lo) / 2.0;
    check.pass = check.observed >= check.threshold;
    result.checks.push_back(check);
  }
  return result;
}

SuiteResult repridge_suite(const RepRidgeSuiteConfig& config) {
  StreamHandle design_stream =
      StreamHandle::from_key(config.seed).child("design");
  std::vector<Eigen::VectorXd> xs;
  xs.reserve(static_cast<std::size_t>(config.samples));
  for (long long i = 0; i < config.samples; ++i) {
    Eigen::VectorXd x(config.dim);
    for (int k = 0; k < config.dim; ++k) x[k] = design_stream.next_gaussian();
    xs.push_back(std::move(x));
  }
  StreamHandle theta_stream =
      StreamHandle::from_key(config.seed).child("theta");
  Eigen::VectorXd theta_star(config.dim);
  for (int k = 0; k < config.dim; ++k) {
    theta_star[k] = theta_stream.next_gaussian();
  }
  theta_star *= config.S / theta_star.norm();

  const RepRidgeParams params{config.delta, config.rho, config.sigma,
                              config.S};
  const SeedPlan plan{config.seed, "repridge-check"};
  long long matches = 0;
  long long coverage_failures = 0;
  for (long long trial = 0; trial < config.trials; ++trial) {
    PairedStreams streams = paired_streams(plan, trial);
    const StreamHandle shift = streams.shared.child("ridge");
    StreamHandle* envs[2] = {&streams.env_a, &streams.env_b};
    Eigen::VectorXd outputs[2];
    for (int run = 0; run < 2; ++run) {
      GramState gram(config.dim, config.lambda);
      for (const auto& x : xs) {
        const double y =
            x.dot(theta_star) + config.sigma * envs[run]->next_gaussian();
        gram.update(x, y);
      }
      const ReplicableEstimate est = rep_ridge(gram, params, shift);
      outputs[run] = est.theta_tilde;
      const Eigen::VectorXd err = est.theta_tilde - theta_star;
      const double v_norm = std::sqrt(err.dot(gram.V() * err));
      if (v_norm > est.beta_inflated) ++coverage_failures;
    }
    if (outputs[0] == outputs[1]) ++matches;
  }

  SuiteResult result;
  {
    const WilsonInterval ci = wilson95(matches, config.trials);
    SuiteCheck check;
    check.name = "paired_match_rate";
    check.observed =
        static_cast<double>(matches) / static_cast<double>(config.trials);
    check.wilson_lo = ci.lo;
    check.wilson_hi = ci.hi;
    check.upper_bound = false;
    check.threshold = 1.0 - config.rho - config.match_slack;
    check.pass = check.wilson_lo >= check.threshold;
    result.checks.push_back(check);
  }
  {
    const long long observations = 2 * config.trials;
    const WilsonInterval ci = wilson95(coverage_failures, observations);
    SuiteCheck check;
    check.name = "coverage_failure_rate";
    check.observed = static_cast<double>(coverage_failures) /
                     static_cast<double>(observations);
    check.wilson_lo = ci.lo;
    check.wilson_hi = ci.hi;
    check.upper_bound = true;
    check.threshold = config.delta + (ci.hi - ci.lo) / 2.0;
    check.pass = check.observed <= check.threshold;
    result.checks.push_back(check);
  }
  return result;
}

}  // namespace repbandit
