#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hvseg/core.hpp"

namespace hvseg {

// Exhaustive reference solvers. Exponential; meant for cross-checking the
// polynomial pipeline on small instances, not for production use.

struct BruteResult {
  bool yes = false;
  std::vector<Order> witnesses;  // all accepted orders, lexicographic
};

// Tries every permutation of the verticals; throws if |V|! exceeds cap.
BruteResult brute_sfhvseg(const SegInstance& instance,
                          std::uint64_t cap = 1000000);

// Level-by-level search over per-level permutations, pruning on constraint
// violations and on disagreement with the previous level. `cap` bounds the
// number of explored search nodes; exceeding it throws.
struct BruteLevelResult {
  bool yes = false;
  std::optional<LevelWitness> witness;  // first accepted assignment
};
BruteLevelResult brute_tlp(const LevelInstance& instance,
                           std::uint64_t cap = 1000000);

// Tries every permutation of the ground set; throws if |X|! exceeds cap.
struct BruteSeqResult {
  bool yes = false;
  std::vector<Order> witnesses;  // all global orders whose restrictions work
};
BruteSeqResult brute_seqpq(const SeqPQInstance& instance,
                           std::uint64_t cap = 1000000);

}  // namespace hvseg
