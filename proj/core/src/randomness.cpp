#include "repbandit/randomness.hpp"

#include <cmath>

#include "repbandit/errors.hpp"

namespace repbandit {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stafford variant 13 of the splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

// Absorb one path label into a stream key. Each level passes through the
// finalizer, so ["ab","c"] and ["a","bc"] land on unrelated keys.
std::uint64_t absorb(std::uint64_t key, std::string_view label) {
  return mix64(key + kGolden + fnv1a(label));
}

}  // namespace

StreamHandle StreamHandle::child(std::string_view label) const {
  return StreamHandle(absorb(key_, label));
}

StreamHandle StreamHandle::child(std::uint64_t index) const {
  return child(std::string_view(std::to_string(index)));
}

std::uint64_t StreamHandle::next_u64() {
  // Counter-mode splitmix64: output k is mix(key + (k+1)*gamma).
  const std::uint64_t out = mix64(key_ + (cursor_ + 1) * kGolden);
  ++cursor_;
  return out;
}

double StreamHandle::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double StreamHandle::next_gaussian() {
  // Offset by half an ulp so p is strictly inside (0,1).
  const double p =
      static_cast<double>(next_u64() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  return inverse_normal_cdf(p);
}

StreamHandle derive_stream(const SeedPlan& plan,
                           const std::vector<std::string>& path) {
  if (path.empty()) {
    throw InputError("derive_stream: path must be non-empty");
  }
  StreamHandle h = StreamHandle::from_key(mix64(plan.master_seed))
                       .child(std::string_view(plan.experiment_id));
  for (const auto& label : path) {
    h = h.child(std::string_view(label));
  }
  return h;
}

PairedStreams paired_streams(const SeedPlan& plan, std::int64_t trial_id) {
  if (trial_id < 0) {
    throw InputError("paired_streams: trial_id must be >= 0");
  }
  StreamHandle trial = StreamHandle::from_key(mix64(plan.master_seed))
                           .child(std::string_view(plan.experiment_id))
                           .child("trial")
                           .child(static_cast<std::uint64_t>(trial_id));
  PairedStreams out;
  out.shared = trial.child("shared");
  out.env_a = trial.child("env").child(std::uint64_t{0});
  out.env_b = trial.child("env").child(std::uint64_t{1});
  return out;
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InputError("inverse_normal_cdf: p must lie in (0,1)");
  }
  // AS 241 algorithm PPND16, Wichura (1988). Relative error below 1e-15
  // over the full open interval.
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    const double num =
        (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
              6.7265770927008700853e4) *
                 r +
             4.5921953931549871457e4) *
                r +
            1.3731693765509461125e4) *
               r +
           1.9715909503065514427e3) *
              r +
          1.3314166789178437745e2) *
             r +
         3.3871328727963666080e0);
    const double den =
        (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
              3.9307895800092710610e4) *
                 r +
             2.1213794301586595867e4) *
                r +
            5.3941960214247511077e3) *
               r +
           6.8718700749205790830e2) *
              r +
          4.2313330701600911252e1) *
             r +
         1.0);
    return q * num / den;
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    const double num =
        (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) *
                 r +
             1.27045825245236838258e0) *
                r +
            3.64784832476320460504e0) *
               r +
           5.76949722146069140550e0) *
              r +
          4.63033784615654529590e0) *
             r +
         1.42343711074968357734e0);
    const double den =
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) *
                 r +
             1.48103976427480074590e-1) *
                r +
            6.89767334985100004550e-1) *
               r +
           1.67638483018380384940e0) *
              r +
          2.05319162663775882187e0) *
             r +
         1.0);
    value = num / den;
  } else {
    r -= 5.0;
    const double num =
        (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) *
                 r +
             2.65321895265761230930e-2) *
                r +
            2.96560571828504891230e-1) *
               r +
           1.78482653991729133580e0) *
              r +
          5.46378491116411436990e0) *
             r +
         6.65790464350110377720e0);
    const double den =
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                  r +
              1.84631831751005468180e-5) *
                 r +
             7.86869131145613259100e-4) *
                r +
            1.48753612908506148525e-2) *
               r +
           1.36929880922735805310e-1) *
              r +
          5.99832206555887937690e-1) *
             r +
         1.0);
    value = num / den;
  }
  return q < 0.0 ? -value : value;
}

}  // namespace repbandit
