#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace tiedecay {

// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// Counter-based random stream. Draw i of the stream is mix64(key + (i+1)*gamma),
// so any draw can be evaluated directly from its index and streams for
// different keys never share state. This is what makes every ensemble in the
// toolkit independent of thread count and scheduling order.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  // Stream for (seed, a, b): e.g. (master seed, realization, edge index).
  constexpr CounterRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept
      : key_(derive_key(seed, a, b)) {}

  static constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t a,
                                            std::uint64_t b) noexcept {
    return mix64(mix64(mix64(seed) + a * kGoldenGamma) + b * kGoldenGamma);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept { return at(counter_++); }
  constexpr result_type at(std::uint64_t i) const noexcept {
    return mix64(key_ + (i + 1) * kGoldenGamma);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return to_unit((*this)()); }
  double uniform_at(std::uint64_t i) const noexcept { return to_unit(at(i)); }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

  static constexpr double to_unit(std::uint64_t r) noexcept {
    return static_cast<double>(r >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Precomputed prefix of CounterRng::derive_key for a fixed (seed, a), so that
// per-edge streams within one realization cost a single extra mix.
class StreamFamily {
 public:
  constexpr StreamFamily(std::uint64_t seed, std::uint64_t a) noexcept
      : prefix_(mix64(mix64(seed) + a * kGoldenGamma)) {}

  constexpr CounterRng stream(std::uint64_t b) const noexcept {
    return CounterRng(mix64(prefix_ + b * kGoldenGamma));
  }

 private:
  std::uint64_t prefix_;
};

inline constexpr std::uint64_t kNeverSucceeds = std::numeric_limits<std::uint64_t>::max();

// Number of failures before the first success of i.i.d. Bernoulli(p) trials,
// sampled by inversion. `log_q` is log(1 - p): 0 for p = 0 (never succeeds),
// -inf for p = 1 (immediate success).
inline std::uint64_t geometric_failures(CounterRng& rng, double log_q) noexcept {
  const double u = 1.0 - rng.uniform();  // (0, 1]
  if (log_q == 0.0) return kNeverSucceeds;
  if (std::isinf(log_q)) return 0;
  const double k = std::floor(std::log(u) / log_q);
  return k >= 9.0e18 ? kNeverSucceeds : static_cast<std::uint64_t>(k);
}

}  // namespace tiedecay
