#pragma once

#include <cstdint>

#include "hvseg/core.hpp"

namespace hvseg {

/// splitmix64: the state advances by 0x9E3779B97F4A7C15 per draw and each
/// output z is finalized as
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
/// Fixed by this recurrence so seeds reproduce bit-identically everywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform in [0, bound); bound > 0. Rejection-free modulo is fine here:
  /// bounds are tiny relative to 2^64, and reproducibility is what matters.
  std::uint64_t below(std::uint64_t bound);
  double unit();  // uniform in [0, 1)

 private:
  std::uint64_t state_;
};

/// Random axis-aligned segments with distinct coordinates; the instance is
/// their proper-crossing graph with sigma_h read off the y-coordinates, so it
/// is a yes-instance by construction (the x-order of the verticals works).
SegInstance gen_arrangement(int n_h, int n_v, double density,
                            std::uint64_t seed);

/// Hidden order over n elements, contiguous random lifespans over k trees,
/// each tree built from interval constraints of the hidden order restricted
/// to its leaves — a yes-instance with the hidden order as witness.
SeqPQInstance gen_planted_seqpq(int n, int k, std::uint64_t seed);

/// Toggles `flips` uniformly random (h, v) adjacencies.
SegInstance mutate(const SegInstance& instance, int flips,
                   std::uint64_t seed);

}  // namespace hvseg
