#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace anttamp {

// splitmix64; used to derive child seeds so that independent streams never
// share state with the parent generator.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derive the seed of a named child stream. Callers hold one Rng per stream;
/// nothing in the library draws from a shared generator.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view stream, std::uint64_t index = 0) {
  return splitmix64(base ^ splitmix64(fnv1a64(stream)) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

/// Seeded generator with platform-stable uniform draws (we avoid
/// std::uniform_real_distribution; its output is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_index(std::uint64_t n) {
    // Rejection to remove modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_index(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace anttamp
