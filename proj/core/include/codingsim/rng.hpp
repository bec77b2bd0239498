#pragma once

#include <cstdint>
#include <limits>

namespace codingsim {

/// SplitMix64 generator. Small state, so a fresh stream per (seed, run, event)
/// key costs nothing; results are identical on every platform because no
/// std:: distribution is involved.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi).
  constexpr double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  /// Fair coin from the top bit.
  constexpr bool coin() noexcept { return ((*this)() >> 63) != 0; }

  /// Uniform integer in [0, n) by rejection; n must be > 0.
  constexpr std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x = (*this)();
    while (x >= limit) x = (*this)();
    return x % n;
  }

 private:
  std::uint64_t state_;
};

/// Independent draw domains so that, e.g., initialization and event draws
/// with the same counter never share a stream.
enum class Stream : std::uint64_t {
  Events = 1,
  Init = 2,
  Topology = 3,
  Contacts = 4,
  Planted = 5,
};

constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x ^= x >> 33;
  x *= 0xFF51AFD7ED558CCDULL;
  x ^= x >> 33;
  x *= 0xC4CEB9FE1A85EC53ULL;
  x ^= x >> 33;
  return x;
}

/// Counter-based stream keyed by (seed, run, counter, domain). Draws depend
/// only on the key, never on which thread or in which order streams are made.
constexpr SplitMix64 keyed_stream(std::uint64_t seed, std::uint64_t run,
                                  std::uint64_t counter, Stream domain) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6A09E667F3BCC909ULL);
  h = mix64(h ^ (run + 0x3C6EF372FE94F82BULL));
  h = mix64(h ^ (counter + 0xA54FF53A5F1D36F1ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(domain));
  return SplitMix64(h);
}

}  // namespace codingsim
