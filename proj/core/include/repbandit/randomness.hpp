#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace repbandit {

/// Root of all randomness for one experiment. Every stream in the run is a
/// pure function of (master_seed, experiment_id, label path), so two runs of
/// a trial can share "internal" streams while drawing environment noise from
/// disjoint ones.
struct SeedPlan {
  std::uint64_t master_seed = 0;
  std::string experiment_id = "default";
};

/// A counter-based random stream addressed by a label path.
///
/// The value at cursor k is a pure function of (key, k); advancing the cursor
/// is the only mutation. Child streams are derived by label, independent of
/// the parent's cursor, so the amount of randomness consumed elsewhere never
/// shifts a stream's contents.
class StreamHandle {
 public:
  StreamHandle() = default;

  /// Stream rooted directly at a raw 64-bit key (no SeedPlan involved).
  static StreamHandle from_key(std::uint64_t key) { return StreamHandle(key); }

  StreamHandle child(std::string_view label) const;
  StreamHandle child(std::uint64_t index) const;

  std::uint64_t next_u64();
  /// Uniform on [0,1), 53 random bits.
  double next_uniform();
  /// Standard normal via a fixed inverse-CDF transform of one uniform.
  double next_gaussian();

  void seek(std::uint64_t cursor) { cursor_ = cursor; }
  std::uint64_t cursor() const { return cursor_; }
  std::uint64_t key() const { return key_; }

 private:
  explicit StreamHandle(std::uint64_t key) : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t cursor_ = 0;
};

/// Stream at `path` under the plan. The path must be non-empty.
StreamHandle derive_stream(const SeedPlan& plan,
                           const std::vector<std::string>& path);

/// The three streams of one paired trial: `shared` is identical for both
/// runs; `env_a` and `env_b` feed run 1 and run 2 reward noise.
struct PairedStreams {
  StreamHandle shared;
  StreamHandle env_a;
  StreamHandle env_b;
};

PairedStreams paired_streams(const SeedPlan& plan, std::int64_t trial_id);

/// Quantile function of the standard normal (Wichura's AS 241, double
/// precision variant). p must lie strictly inside (0,1).
double inverse_normal_cdf(double p);

}  // namespace repbandit
