#pragma once

#include <array>
#include <cstdint>

namespace minvar {

// Deterministic xoshiro256++ stream with Box-Muller normal sampling.
// Identical seed gives an identical sample stream on every platform.
// One instance per logical consumer; instances are never shared.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform double in [0, 1).
  double uniform();

  // Standard normal sample.
  double normal();

  // Derives an independent child stream; deterministic in (seed, stream).
  Rng fork(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace minvar
