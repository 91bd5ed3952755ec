#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace nibplan {

// Seeded substream RNG. One master seed fans out to named substreams so that
// modules (user drop, access fading, baselines, per-trial draws) can be rerun
// independently and still reproduce bit-identical sequences. Distribution
// sampling is implemented here rather than with <random> distributions, whose
// algorithms are implementation-defined.
class RngStream {
 public:
  RngStream() : engine_(0) {}
  explicit RngStream(uint64_t seed) : engine_(seed) {}

  static uint64_t derive_seed(uint64_t master, std::string_view stream_name,
                              uint64_t index = 0);

  static RngStream substream(uint64_t master, std::string_view name, uint64_t index = 0) {
    return RngStream(derive_seed(master, name, index));
  }

  uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform integer on [0, n).
  uint64_t uniform_index(uint64_t n);

  // Standard normal, Box-Muller.
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  double exponential(double rate = 1.0) { return -std::log(1.0 - uniform01()) / rate; }

  // Poisson count by accumulating unit-rate exponential arrivals. O(mean),
  // fine for the ~1e6 means this planner sees.
  uint64_t poisson(double mean);

  // Index sampled from a normalized pmf; probabilities must sum to ~1.
  int categorical(const std::vector<double>& pmf);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nibplan
