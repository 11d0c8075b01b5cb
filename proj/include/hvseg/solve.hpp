#pragma once

#include <optional>

#include "hvseg/core.hpp"

namespace hvseg {

struct SolverConfig {
  /// Node-expansion budget for the backtracking search; 0 = unlimited.
  std::uint64_t budget = 0;
  /// Accepted for interface stability; the search is deterministic.
  std::uint64_t seed = 0;
};

/// Global order extending every per-tree order, built as the
/// lexicographically smallest topological order of the union relation.
/// Throws std::runtime_error on a cycle (an inconsistent input family).
Order merge_orders(const std::vector<Order>& per_tree);

/// Nothrow variant used where a cycle is an expected outcome.
std::optional<Order> try_merge_orders(const std::vector<Order>& per_tree);

struct ChainReport {
  bool ok = false;
  std::string detail;
};

/// Checks that every order is represented by its tree and that adjacent
/// orders agree on their shared elements.
ChainReport check_order_chain(const SeqPQInstance& instance,
                          const std::vector<Order>& per_tree);

/// Complete and sound backtracking decision procedure: yes iff a global
/// order of the ground set satisfies every tree. Searches tree by tree,
/// enumerating represented orders consistent with the previous tree's order
/// on the shared elements, with projection-based pruning.
std::optional<OrderWitness> solve_seqpq(const SeqPQInstance& instance,
                                        const SolverConfig& config = {});

/// Decision via tlp_to_seqpq + solve_seqpq, witness pulled back.
std::optional<LevelWitness> solve_tlp(const LevelInstance& instance,
                                      const SolverConfig& config = {});

/// Decision via hvseg_to_tlp + tlp_to_seqpq + solve_seqpq, witness pulled
/// back to sigma_v. Degree-0 verticals are stripped first and appended to
/// the end of the witness.
std::optional<SegWitness> solve_sfhvseg(const SegInstance& instance,
                                        const SolverConfig& config = {});

struct FixedBothResult {
  bool yes = false;
  std::optional<std::pair<Id, Id>> cross;  // one witnessing cell on no
};

/// Fully-fixed recognizer: yes iff the (sigma_h, sigma_v)-ordered adjacency
/// matrix is cross-free. Requires sigma_v.
FixedBothResult recognize_fixed_both(const SegInstance& instance);

}  // namespace hvseg
