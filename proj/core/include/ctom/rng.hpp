#pragma once

#include <cstdint>
#include <random>

namespace ctom {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Independent RNG stream for item `index` under a master seed. Batch results
/// stay identical no matter how work is split across threads.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) + index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return uniform_(engine_); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * normal_(engine_); }
  int uniform_int(int n) {  // in [0, n)
    return std::uniform_int_distribution<int>(0, n - 1)(engine_);
  }
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ctom
