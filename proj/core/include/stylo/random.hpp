#pragma once

// Deterministic seed tree and a portable random source.
//
// Every stochastic step in the library draws from an Rng whose seed is derived
// from a master seed plus a path of counters (simulation, window, n-gram, ...).
// Seeds never depend on evaluation order, so parallel runs reproduce serial ones.

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace stylo {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream tags keep sibling branches of the seed tree apart.
enum class SeedStream : std::uint64_t {
  Subset = 0x5b,
  Cell = 0xce,
  Restart = 0x4e,
  Permutation = 0x9e,
  Synth = 0x57,
  Importance = 0x1f,
};

template <typename... Path>
constexpr std::uint64_t derive_seed(std::uint64_t master, Path... path) {
  std::uint64_t h = splitmix64(master);
  ((h = splitmix64(h ^ splitmix64(static_cast<std::uint64_t>(path)))), ...);
  return h;
}

// mt19937_64 output is fixed by the standard; the std distributions are not,
// so bounded and real draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace stylo
