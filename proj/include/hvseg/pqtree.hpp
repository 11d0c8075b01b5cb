#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hvseg {

using Id = std::string;
using Order = std::vector<Id>;
using IdSet = std::set<Id>;

/// Rooted P/Q-node tree over a leaf set, or the null tree.
///
/// Immutable value type; every operation returns a new tree. Trees are kept
/// in canonical form so that structural equality is meaningful:
///   - no inner node with a single child,
///   - no Q-node with two children (normalized to a P-node),
///   - P-children sorted by their smallest leaf id,
///   - Q-child sequences oriented towards the lexicographically smaller
///     reading (a Q-node and its reversal are the same tree).
class PQTree {
 public:
  enum class Kind { Leaf, P, Q };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Kind kind;
    Id leaf;                        // Kind::Leaf only
    std::vector<NodePtr> children;  // inner nodes only
    IdSet leaves;                   // cached leaf set of the subtree
  };

  PQTree() = default;  // null tree

  static PQTree null_tree();
  static PQTree leaf(const Id& id);
  /// Single P-node over all leaves (or a lone leaf); represents every order.
  static PQTree universal(const IdSet& leaves);
  static PQTree p_node(const std::vector<PQTree>& children);
  static PQTree q_node(const std::vector<PQTree>& children);
  /// Fold of reduce() over universal(ground). Null tree iff unsatisfiable.
  static PQTree from_constraints(const IdSet& ground,
                                 const std::vector<IdSet>& constraints);

  bool is_null() const { return root_ == nullptr; }
  const IdSet& leaves() const;
  NodePtr root() const { return root_; }

  /// Restrict to the represented orders in which `subset` is consecutive.
  /// Returns the null tree iff no represented order has that property.
  PQTree reduce(const IdSet& subset) const;

  /// Tree representing exactly the restrictions of represented orders to
  /// `keep` (delete the other leaves, re-canonicalize).
  PQTree project(const IdSet& keep) const;

  /// Membership of `order` (a permutation of the leaf set) in the
  /// represented-order family.
  bool represents(const Order& order) const;
  /// represents() applied to the restriction of `order` to the leaf set.
  bool satisfies(const Order& order) const;

  /// Number of represented orders, saturating at UINT64_MAX.
  std::uint64_t order_count() const;
  /// The exact represented-order family, sorted, no duplicates.
  /// Throws if order_count() exceeds `cap`.
  std::vector<Order> enumerate_orders(std::uint64_t cap) const;

  /// Constraint family whose from_constraints() reconstruction has the same
  /// order family: the subtree leaf set of every inner node, plus the union
  /// of each pair of adjacent Q-node children.
  std::vector<IdSet> to_constraints() const;

  /// The two laminar halves behind laminar_split(): P-node subtree sets all
  /// in the first family, Q-node adjacent-pair unions alternating between
  /// the two (first pair to the first family).
  std::pair<std::vector<IdSet>, std::vector<IdSet>> split_constraints() const;

  /// Two PQ-trees over the same leaf set, each representing a laminar
  /// constraint family, whose joint order family equals this tree's.
  std::pair<PQTree, PQTree> laminar_split() const;

  /// Parenthesized debug form: leaves verbatim, P(...) and Q[...].
  std::string to_string() const;

  bool operator==(const PQTree& other) const;
  bool operator!=(const PQTree& other) const { return !(*this == other); }

 private:
  explicit PQTree(NodePtr root) : root_(std::move(root)) {}
  NodePtr root_;
};

}  // namespace hvseg
