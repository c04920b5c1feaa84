#pragma once

#include <cstdint>
#include <random>

namespace k2bench {

/// Seedable generator used for every random draw in the workbench.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not (libstdc++ and libc++ disagree),
/// so all transforms from raw 64-bit words are implemented here:
///   - uniform01: top 53 bits scaled by 2^-53, range [0, 1)
///   - uniform_int: rejection sampling on the smallest covering power of two
///   - exponential: -log(1 - u)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in the closed range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double exponential();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for sub-stream `stream` of `parent`. Used to give each experiment pair
/// (and each stage within a pair) its own independent generator.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream);

}  // namespace k2bench
