#pragma once

#include <span>

#include "repbandit/randomness.hpp"

namespace repbandit {

/// Universal constant in the accuracy radius schedule tau(n).
inline constexpr double kCMeanEst = 8.0;

/// Budget of one replicable mean-estimation call.
///
/// The estimator is rho1-replicable and tau(n)-accurate with failure
/// probability delta1. Construction requires delta1 <= rho1/4 so the grid
/// width 2*tau0/(rho1 - 2*delta1) stays bounded.
struct RepMeanParams {
  double delta1 = 0.0;
  double rho1 = 0.0;
  long long call_index = 0;  // which shared shift this call consumes

  RepMeanParams(double delta1_in, double rho1_in, long long call_index_in = 0);
};

/// Accuracy radius sqrt(c_me * ln(1/delta1) / (n * (rho1-delta1)^2)).
/// Formula-level helper; no regime validation beyond n >= 1.
double tau_schedule(long long n, double delta1, double rho1,
                    double c_me = kCMeanEst);
double tau_schedule(long long n, const RepMeanParams& p);

/// Hoeffding radius sqrt(ln(2/delta1) / (2n)) for [0,1]-valued samples.
double hoeffding_radius(long long n, double delta1);

/// Width of the rounding grid used internally: 2*tau0(n)/(rho1 - 2*delta1).
double repmean_grid_width(long long n, const RepMeanParams& p);

/// Replicable mean estimate: the empirical mean snapped to the midpoint of
/// a shifted grid cell, with the unit shift v in [0,1) supplied explicitly
/// (the actual shift is v * grid width). Samples must lie in [0,1].
double rep_mean_with_unit_shift(std::span<const double> samples,
                                const RepMeanParams& p, double unit_shift);

/// As above with the unit shift drawn from `shift_stream` at cursor 0.
/// Callers position the stream at the per-call label path so that paired
/// runs consume identical shifts regardless of environment randomness.
double rep_mean(std::span<const double> samples, const RepMeanParams& p,
                StreamHandle shift_stream);

}  // namespace repbandit
