#ifndef BKNN_RNG_HPP
#define BKNN_RNG_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace bknn {

/// SplitMix64 finalizer. Used for seeding and for hashing stream keys.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Consumer tags used to key independent substreams of one experiment seed.
enum class StreamTag : std::uint64_t {
  Training = 1,
  Mcmc = 2,
  Bootstrap = 3,
  Test = 99,
};

/// xoshiro256** (Blackman & Vigna) with SplitMix64 seeding.
///
/// Streams are keyed, not jumped: `Rng::keyed(seed, {a, b, ...})` hashes the
/// key path into a fresh 256-bit state, so any consumer can be reconstructed
/// from its key regardless of execution order or thread count. All derived
/// variates (uniform doubles, bounded integers, normals) are produced by code
/// in this class so that draws do not depend on the standard library's
/// distribution implementations.
class Rng {
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  /// Stream identified by a seed and a key path.
  static Rng keyed(std::uint64_t seed,
                   std::initializer_list<std::uint64_t> path);

  /// Independent child stream; does not advance this generator.
  Rng substream(std::uint64_t index) const;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return next(); }
  std::uint64_t next();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1]; safe to take the log of.
  double uniform_pos();
  /// Uniform integer on [0, bound), bound > 0 (Lemire's method).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal via the Marsaglia polar method.
  double normal();

  friend bool operator==(const Rng &, const Rng &) = default;

private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

} // namespace bknn

#endif
