#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace dygraph {

// Deterministic splitmix64-based generator. std::mt19937 would also be
// portable, but the standard distributions are not, and reproducibility of
// workloads across platforms is part of the bench contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    // Rejection sampling keeps the distribution exactly uniform.
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

  // Uniform real in [0, 1).
  double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Exponential with rate lambda > 0.
  double exponential(double lambda) {
    double u;
    do {
      u = real01();
    } while (u <= 0.0);
    return -std::log(u) / lambda;
  }

  // Derive an independent stream (for fan-out over workers/instances).
  Rng fork() { return Rng(next_u64() ^ 0xd1b54a32d192ed03ULL); }

  template <typename T>
  const T& pick(const std::vector<T>& xs) {
    return xs[below(xs.size())];
  }

 private:
  std::uint64_t state_;
};

}  // namespace dygraph
