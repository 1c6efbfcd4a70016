#ifndef VOXENC_RNG_HPP_
#define VOXENC_RNG_HPP_

#include <array>
#include <cstdint>

namespace voxenc {

/// Deterministic random generator (xoshiro256++ seeded through splitmix64).
/// Self-contained so that seeded outputs are identical across platforms and
/// standard-library implementations; every stochastic routine in the toolkit
/// draws from this and nothing else.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal deviate (Box-Muller; pairs cached).
  double gauss();

  /// Unbiased integer in [0, n), n > 0.
  std::uint64_t below(std::uint64_t n);

 private:
  std::array<std::uint64_t, 4> state_;
  double cached_gauss_ = 0.0;
  bool has_cached_gauss_ = false;
};

/// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace voxenc

#endif  // VOXENC_RNG_HPP_
