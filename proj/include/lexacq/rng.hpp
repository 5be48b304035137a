#ifndef LEXACQ_RNG_HPP
#define LEXACQ_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lexacq {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Role tags for deriving independent sub-streams. Values are part of the
/// reproducibility contract; do not renumber.
enum class StreamTag : std::uint64_t {
  kUtterance = 1,
  kFirstParse = 2,
  kFixTrials = 3,
  kReparse = 4,
  kGarbageCollect = 5,
  kReduce = 6,
  kRestart = 7,
  kGenerate = 8,
};

/// Seeded random stream. The engine (mt19937_64) has a fully specified
/// output sequence, and the draws below are computed from raw engine output,
/// so a stream is reproducible across standard libraries.
///
/// Streams form a tree: derive() hashes the parent's key with a tag and
/// indices, never consuming draws from the parent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : key_(detail::splitmix64(seed)), engine_(key_) {}

  std::uint64_t key() const noexcept { return key_; }

  Rng derive(StreamTag tag, std::initializer_list<std::uint64_t> indices = {}) const {
    std::uint64_t k = detail::splitmix64(key_ ^ detail::splitmix64(static_cast<std::uint64_t>(tag)));
    for (std::uint64_t i : indices) k = detail::splitmix64(k ^ detail::splitmix64(i + 0x632be59bd9b4e019ULL));
    Rng child;
    child.key_ = k;
    child.engine_.seed(k);
    return child;
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// True with probability p (p <= 0 never, p >= 1 always). Always consumes
  /// exactly one draw.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

}  // namespace lexacq

#endif  // LEXACQ_RNG_HPP
