#include "repbandit/repmean.hpp"

#include <cmath>
#include <numeric>

#include "repbandit/errors.hpp"
#include "repbandit/rounding.hpp"

namespace repbandit {

RepMeanParams::RepMeanParams(double delta1_in, double rho1_in,
                             long long call_index_in)
    : delta1(delta1_in), rho1(rho1_in), call_index(call_index_in) {
  if (!(delta1 > 0.0 && delta1 < 1.0) || !(rho1 > 0.0 && rho1 < 1.0)) {
    throw ConfigError("RepMeanParams: delta1 and rho1 must lie in (0,1)");
  }
  if (delta1 > rho1 / 4.0) {
    throw ConfigError("RepMeanParams: requires delta1 <= rho1/4");
  }
}

double tau_schedule(long long n, double delta1, double rho1, double c_me) {
  if (n < 1) {
    throw InputError("tau_schedule: n must be >= 1");
  }
  const double diff = rho1 - delta1;
  return std::sqrt(c_me * std::log(1.0 / delta1) /
                   (static_cast<double>(n) * diff * diff));
}

double tau_schedule(long long n, const RepMeanParams& p) {
  return tau_schedule(n, p.delta1, p.rho1);
}

double hoeffding_radius(long long n, double delta1) {
  if (n < 1) {
    throw InputError("hoeffding_radius: n must be >= 1");
  }
  return std::sqrt(std::log(2.0 / delta1) / (2.0 * static_cast<double>(n)));
}

double repmean_grid_width(long long n, const RepMeanParams& p) {
  return 2.0 * hoeffding_radius(n, p.delta1) / (p.rho1 - 2.0 * p.delta1);
}

double rep_mean_with_unit_shift(std::span<const double> samples,
                                const RepMeanParams& p, double unit_shift) {
  if (samples.empty()) {
    throw InputError("rep_mean: sample list must be non-empty");
  }
  for (double s : samples) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw InputError("rep_mean: samples must lie in [0,1]");
    }
  }
  if (!(unit_shift >= 0.0 && unit_shift < 1.0)) {
    throw InputError("rep_mean: unit shift must lie in [0,1)");
  }
  const long long n = static_cast<long long>(samples.size());
  // Guard: the radius this construction achieves must stay within the
  // advertised schedule; valid params never trip this.
  const double tau0 = hoeffding_radius(n, p.delta1);
  const double achieved = tau0 * (1.0 + 1.0 / (p.rho1 - 2.0 * p.delta1));
  if (achieved > tau_schedule(n, p) * (1.0 + 1e-12)) {
    throw ConfigError(
        "rep_mean: achieved radius exceeds tau schedule for these params");
  }
  const double mean =
      std::accumulate(samples.begin(), samples.end(), 0.0) /
      static_cast<double>(n);
  const double alpha = repmean_grid_width(n, p);
  return grid_round_scalar(mean, alpha, unit_shift * alpha);
}

double rep_mean(std::span<const double> samples, const RepMeanParams& p,
                StreamHandle shift_stream) {
  shift_stream.seek(0);
  return rep_mean_with_unit_shift(samples, p, shift_stream.next_uniform());
}

}  // namespace repbandit
