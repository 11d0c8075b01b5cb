#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hvseg/pqtree.hpp"

namespace hvseg {

/// Bipartite graph (H ∪ V, E) with the vertical order of the horizontals
/// fixed. sigma_v present only for the fully-fixed variant. Intersections
/// are proper crossings only; overlaps are out of scope.
struct SegInstance {
  std::vector<Id> horizontals;
  std::vector<Id> verticals;
  std::set<std::pair<Id, Id>> edges;  // (h, v)
  Order sigma_h;                      // position 0 = bottom level
  std::optional<Order> sigma_v;

  bool operator==(const SegInstance&) const = default;
};

/// Proper level graph with one laminar family of consecutivity constraints
/// per level. Levels are 1..num_levels.
struct LevelInstance {
  int num_levels = 0;
  std::map<Id, int> level;            // vertex -> level
  std::set<std::pair<Id, Id>> edges;  // (lower, upper)
  std::vector<std::vector<IdSet>> constraints;  // index 0 = level 1

  bool operator==(const LevelInstance&) const = default;
};

/// Ground set X (the union of the leaf sets) plus a sequence of PQ-trees
/// with the consecutive-lifespan property.
struct SeqPQInstance {
  std::vector<PQTree> trees;

  IdSet ground() const;

  bool operator==(const SeqPQInstance&) const = default;
};

struct SegWitness {
  Order sigma_v;

  bool operator==(const SegWitness&) const = default;
};

struct LevelWitness {
  std::vector<Order> orders;  // index 0 = level 1

  bool operator==(const LevelWitness&) const = default;
};

struct OrderWitness {
  std::vector<Order> per_tree;
  Order global;

  bool operator==(const OrderWitness&) const = default;
};

using Witness = std::variant<SegWitness, LevelWitness, OrderWitness>;

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

ValidationReport validate(const SegInstance& instance);
ValidationReport validate(const LevelInstance& instance);
ValidationReport validate(const SeqPQInstance& instance);

/// Derived view of a SegInstance: level of each horizontal (1-based rank in
/// sigma_h), lifespan per vertical, active and intersecting sets per level.
struct LevelStructure {
  std::map<Id, int> level;                      // h -> 1..k
  std::map<Id, std::pair<int, int>> lifespan;   // v -> [lo, hi]
  std::vector<IdSet> active;                    // index 0 = level 1
  std::vector<IdSet> intersecting;
};

/// Throws std::invalid_argument on invalid instances or degree-0 verticals
/// (strip those first; they carry no constraint).
LevelStructure level_structure(const SegInstance& instance);

struct CheckResult {
  bool ok = false;
  std::string detail;  // violation description when !ok
};

CheckResult check_witness(const SegInstance& instance, const SegWitness& w);
CheckResult check_witness(const LevelInstance& instance, const LevelWitness& w);
CheckResult check_witness(const SeqPQInstance& instance, const OrderWitness& w);
CheckResult check_witness(const SegInstance& instance, const Witness& w);
CheckResult check_witness(const LevelInstance& instance, const Witness& w);
CheckResult check_witness(const SeqPQInstance& instance, const Witness& w);

/// First cross cell of the (sigma_h, sigma_v)-ordered adjacency matrix: a
/// zero cell with ones strictly left and right in its row and strictly above
/// and below in its column. Prefix-count based, O(|H|·|V|).
std::optional<std::pair<Id, Id>> find_cross(const SegInstance& instance,
                                            const Order& sigma_v);

/// Vertices of each level in 1..num_levels, sorted by id.
std::vector<IdSet> level_sets(const LevelInstance& instance);

bool is_permutation_of(const Order& order, const IdSet& domain);

}  // namespace hvseg
