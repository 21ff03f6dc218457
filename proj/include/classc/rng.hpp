#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace classc {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

/// Deterministic pseudo-random stream with key-derived splitting.
///
/// split(i) derives an independent child stream from the parent's key and the
/// child index only, so substreams are reproducible regardless of how much of
/// the parent has been consumed. All variate generation is implemented here
/// (not via std:: distributions) so that a given seed yields the same sequence
/// on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : key_(seed) {
    std::uint64_t s = seed;
    std::seed_seq seq{detail::splitmix64(s), detail::splitmix64(s + 1),
                      detail::splitmix64(s + 2), detail::splitmix64(s + 3)};
    engine_.seed(seq);
  }

  RngStream split(std::uint64_t child) const {
    return RngStream(detail::splitmix64(key_ ^ detail::splitmix64(child + 1)));
  }

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1] (safe as a log argument).
  double uniform_pos() { return 1.0 - uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n) {
    // modulo bias is < 2^-40 for the n used here (desk-scale counts)
    return engine_() % n;
  }

  /// Standard normal via Box-Muller; caches the second variate.
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double phi = 6.283185307179586476925286766559 * uniform();
    cached_ = r * std::sin(phi);
    has_cached_ = true;
    return r * std::cos(phi);
  }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace classc
