#include "hvseg/pqtree.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace hvseg {

namespace {

using Node = PQTree::Node;
using NodePtr = PQTree::NodePtr;
using Kind = PQTree::Kind;

NodePtr make_leaf(const Id& id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Leaf;
  n->leaf = id;
  n->leaves.insert(id);
  return n;
}

NodePtr make_inner(Kind kind, std::vector<NodePtr> children) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  for (const auto& c : children) n->leaves.insert(c->leaves.begin(), c->leaves.end());
  n->children = std::move(children);
  return n;
}

const Id& min_leaf(const NodePtr& n) { return *n->leaves.begin(); }

// Canonical form: collapse unary nodes, 2-child Q -> P, deterministic child
// order for P-nodes, canonical orientation for Q-nodes.
NodePtr canonicalize(const NodePtr& n) {
  if (n->kind == Kind::Leaf) return n;
  std::vector<NodePtr> cs;
  cs.reserve(n->children.size());
  for (const auto& c : n->children) cs.push_back(canonicalize(c));
  if (cs.size() == 1) return cs[0];
  Kind kind = n->kind;
  if (kind == Kind::Q && cs.size() == 2) kind = Kind::P;
  if (kind == Kind::P) {
    std::sort(cs.begin(), cs.end(), [](const NodePtr& a, const NodePtr& b) {
      return min_leaf(a) < min_leaf(b);
    });
  } else {
    std::vector<Id> fwd, rev;
    for (const auto& c : cs) fwd.push_back(min_leaf(c));
    rev.assign(fwd.rbegin(), fwd.rend());
    if (rev < fwd) std::reverse(cs.begin(), cs.end());
  }
  return make_inner(kind, std::move(cs));
}

std::size_t overlap_count(const IdSet& a, const IdSet& b) {
  const IdSet& small = a.size() <= b.size() ? a : b;
  const IdSet& big = a.size() <= b.size() ? b : a;
  std::size_t k = 0;
  for (const auto& x : small) k += big.count(x);
  return k;
}

enum class Mark { Empty, Full, Partial };

Mark mark_of(const NodePtr& n, const IdSet& s) {
  std::size_t k = overlap_count(n->leaves, s);
  if (k == 0) return Mark::Empty;
  if (k == n->leaves.size()) return Mark::Full;
  return Mark::Partial;
}

// Group a list of sibling nodes into a single node (P if several).
NodePtr group(std::vector<NodePtr> nodes) {
  if (nodes.size() == 1) return nodes[0];
  return make_inner(Kind::P, std::move(nodes));
}

// Turn a partial node into a flattened Q-child sequence reading
// empty...full. Returns false on failure (subset not reducible).
bool make_partial_seq(const NodePtr& n, const IdSet& s, std::vector<NodePtr>& out);

bool partial_seq_of_p(const NodePtr& n, const IdSet& s, std::vector<NodePtr>& out) {
  std::vector<NodePtr> empty, full, partial;
  for (const auto& c : n->children) {
    switch (mark_of(c, s)) {
      case Mark::Empty: empty.push_back(c); break;
      case Mark::Full: full.push_back(c); break;
      case Mark::Partial: partial.push_back(c); break;
    }
  }
  if (partial.size() > 1) return false;
  if (!empty.empty()) out.push_back(group(std::move(empty)));
  if (!partial.empty() && !make_partial_seq(partial[0], s, out)) return false;
  if (!full.empty()) out.push_back(group(std::move(full)));
  return true;
}

bool partial_seq_of_q(const NodePtr& n, const IdSet& s, std::vector<NodePtr>& out) {
  for (int dir = 0; dir < 2; ++dir) {
    std::vector<NodePtr> cs = n->children;
    if (dir == 1) std::reverse(cs.begin(), cs.end());
    // Pattern along the sequence must be Empty* Partial? Full*.
    std::size_t i = 0;
    while (i < cs.size() && mark_of(cs[i], s) == Mark::Empty) ++i;
    std::size_t part = cs.size();  // index of the single partial child, if any
    if (i < cs.size() && mark_of(cs[i], s) == Mark::Partial) part = i++;
    bool ok = true;
    for (std::size_t j = i; j < cs.size(); ++j)
      if (mark_of(cs[j], s) != Mark::Full) { ok = false; break; }
    if (!ok) continue;
    std::vector<NodePtr> seq;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      if (j == part) {
        if (!make_partial_seq(cs[j], s, seq)) { ok = false; break; }
      } else {
        seq.push_back(cs[j]);
      }
    }
    if (!ok) continue;
    out.insert(out.end(), seq.begin(), seq.end());
    return true;
  }
  return false;
}

bool make_partial_seq(const NodePtr& n, const IdSet& s, std::vector<NodePtr>& out) {
  if (n->kind == Kind::P) return partial_seq_of_p(n, s, out);
  if (n->kind == Kind::Q) return partial_seq_of_q(n, s, out);
  return false;  // leaves are never partial
}

// Restructure the pertinent root so that s becomes consecutive.
// Returns nullptr on failure.
NodePtr reduce_root(const NodePtr& r, const IdSet& s) {
  if (r->kind == Kind::P) {
    std::vector<NodePtr> empty, full, partial;
    for (const auto& c : r->children) {
      switch (mark_of(c, s)) {
        case Mark::Empty: empty.push_back(c); break;
        case Mark::Full: full.push_back(c); break;
        case Mark::Partial: partial.push_back(c); break;
      }
    }
    if (partial.size() > 2) return nullptr;
    if (partial.empty()) {
      // s is the union of the full children; bundle them.
      std::vector<NodePtr> cs = empty;
      cs.push_back(group(std::move(full)));
      return make_inner(Kind::P, std::move(cs));
    }
    std::vector<NodePtr> qseq;
    if (!make_partial_seq(partial[0], s, qseq)) return nullptr;
    if (!full.empty()) qseq.push_back(group(std::move(full)));
    if (partial.size() == 2) {
      std::vector<NodePtr> tail;
      if (!make_partial_seq(partial[1], s, tail)) return nullptr;
      qseq.insert(qseq.end(), tail.rbegin(), tail.rend());
    }
    NodePtr qn = qseq.size() == 1 ? qseq[0] : make_inner(Kind::Q, std::move(qseq));
    if (empty.empty()) return qn;
    std::vector<NodePtr> cs = empty;
    cs.push_back(qn);
    return make_inner(Kind::P, std::move(cs));
  }
  // Q-node root: the non-empty children must form a window whose interior
  // is all full; the window ends may be partial, oriented outward.
  const auto& cs = r->children;
  std::size_t lo = cs.size(), hi = 0;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (mark_of(cs[j], s) != Mark::Empty) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
    }
  }
  for (std::size_t j = lo + 1; j < hi; ++j)
    if (mark_of(cs[j], s) != Mark::Full) return nullptr;
  std::vector<NodePtr> seq(cs.begin(), cs.begin() + lo);
  if (mark_of(cs[lo], s) == Mark::Partial) {
    std::vector<NodePtr> left;
    if (!make_partial_seq(cs[lo], s, left)) return nullptr;
    seq.insert(seq.end(), left.begin(), left.end());
  } else {
    seq.push_back(cs[lo]);
  }
  for (std::size_t j = lo + 1; j < hi; ++j) seq.push_back(cs[j]);
  if (hi > lo) {
    if (mark_of(cs[hi], s) == Mark::Partial) {
      std::vector<NodePtr> right;
      if (!make_partial_seq(cs[hi], s, right)) return nullptr;
      seq.insert(seq.end(), right.rbegin(), right.rend());
    } else {
      seq.push_back(cs[hi]);
    }
  }
  seq.insert(seq.end(), cs.begin() + hi + 1, cs.end());
  return make_inner(Kind::Q, std::move(seq));
}

// Replace the deepest node whose leaves contain s; nullptr on failure.
NodePtr reduce_at(const NodePtr& n, const IdSet& s) {
  if (n->leaves.size() == s.size()) return n;  // s == L(n): already consecutive
  for (std::size_t j = 0; j < n->children.size(); ++j) {
    const auto& c = n->children[j];
    if (c->kind != Kind::Leaf && overlap_count(c->leaves, s) == s.size()) {
      NodePtr replaced = reduce_at(c, s);
      if (!replaced) return nullptr;
      std::vector<NodePtr> cs = n->children;
      cs[j] = replaced;
      return make_inner(n->kind, std::move(cs));
    }
  }
  return reduce_root(n, s);
}

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > std::numeric_limits<std::uint64_t>::max() / b)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t count_node(const NodePtr& n) {
  if (n->kind == Kind::Leaf) return 1;
  std::uint64_t k = 1;
  for (const auto& c : n->children) k = mul_sat(k, count_node(c));
  if (n->kind == Kind::P) {
    for (std::uint64_t i = 2; i <= n->children.size(); ++i) k = mul_sat(k, i);
  } else {
    k = mul_sat(k, 2);
  }
  return k;
}

std::vector<Order> enumerate_node(const NodePtr& n) {
  if (n->kind == Kind::Leaf) return {{n->leaf}};
  std::vector<std::vector<Order>> per_child;
  per_child.reserve(n->children.size());
  for (const auto& c : n->children) per_child.push_back(enumerate_node(c));

  auto concat = [&](const std::vector<std::size_t>& idx) {
    std::vector<Order> acc = {{}};
    for (std::size_t ci : idx) {
      std::vector<Order> next;
      for (const auto& prefix : acc) {
        for (const auto& tail : per_child[ci]) {
          Order o = prefix;
          o.insert(o.end(), tail.begin(), tail.end());
          next.push_back(std::move(o));
        }
      }
      acc = std::move(next);
    }
    return acc;
  };

  std::vector<Order> out;
  std::vector<std::size_t> idx(n->children.size());
  std::iota(idx.begin(), idx.end(), 0);
  if (n->kind == Kind::P) {
    do {
      auto part = concat(idx);
      out.insert(out.end(), part.begin(), part.end());
    } while (std::next_permutation(idx.begin(), idx.end()));
  } else {
    auto fwd = concat(idx);
    out.insert(out.end(), fwd.begin(), fwd.end());
    std::reverse(idx.begin(), idx.end());
    auto rev = concat(idx);
    out.insert(out.end(), rev.begin(), rev.end());
  }
  return out;
}

// Positions of the node's leaves must form a contiguous block; Q-children
// must appear in stored order or its reversal.
struct Interval {
  std::size_t lo, hi;
};

bool interval_of(const NodePtr& n,
                 const std::map<Id, std::size_t>& pos, Interval& out) {
  if (n->kind == Kind::Leaf) {
    auto it = pos.find(n->leaf);
    if (it == pos.end()) return false;
    out = {it->second, it->second};
    return true;
  }
  std::vector<Interval> iv;
  iv.reserve(n->children.size());
  std::size_t total = 0;
  for (const auto& c : n->children) {
    Interval ci;
    if (!interval_of(c, pos, ci)) return false;
    iv.push_back(ci);
    total += ci.hi - ci.lo + 1;
  }
  std::size_t lo = iv[0].lo, hi = iv[0].hi;
  for (const auto& i : iv) {
    lo = std::min(lo, i.lo);
    hi = std::max(hi, i.hi);
  }
  if (hi - lo + 1 != total) return false;  // children do not tile a block
  if (n->kind == Kind::Q) {
    bool asc = true, desc = true;
    for (std::size_t j = 1; j < iv.size(); ++j) {
      if (iv[j].lo < iv[j - 1].lo) asc = false;
      if (iv[j].lo > iv[j - 1].lo) desc = false;
    }
    if (!asc && !desc) return false;
  }
  out = {lo, hi};
  return true;
}

void collect_constraints(const NodePtr& n, bool is_root, bool all_nodes,
                         std::vector<IdSet>* t1, std::vector<IdSet>* t2) {
  if (n->kind == Kind::Leaf) return;
  if (!is_root && (all_nodes || n->kind == Kind::P)) t1->push_back(n->leaves);
  if (n->kind == Kind::Q) {
    bool to_first = true;
    for (std::size_t j = 0; j + 1 < n->children.size(); ++j) {
      IdSet pair = n->children[j]->leaves;
      pair.insert(n->children[j + 1]->leaves.begin(),
                  n->children[j + 1]->leaves.end());
      (to_first ? t1 : t2)->push_back(std::move(pair));
      to_first = !to_first;
    }
  }
  for (const auto& c : n->children)
    collect_constraints(c, false, all_nodes, t1, t2);
}

void print_node(const NodePtr& n, std::string& out) {
  if (n->kind == Kind::Leaf) {
    out += n->leaf;
    return;
  }
  out += n->kind == Kind::P ? "P(" : "Q[";
  for (std::size_t j = 0; j < n->children.size(); ++j) {
    if (j) out += ' ';
    print_node(n->children[j], out);
  }
  out += n->kind == Kind::P ? ')' : ']';
}

bool node_equal(const NodePtr& a, const NodePtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind == Kind::Leaf) return a->leaf == b->leaf;
  if (a->children.size() != b->children.size()) return false;
  for (std::size_t j = 0; j < a->children.size(); ++j)
    if (!node_equal(a->children[j], b->children[j])) return false;
  return true;
}

NodePtr project_node(const NodePtr& n, const IdSet& keep) {
  if (n->kind == Kind::Leaf) return keep.count(n->leaf) ? n : nullptr;
  std::vector<NodePtr> cs;
  for (const auto& c : n->children) {
    NodePtr p = project_node(c, keep);
    if (p) cs.push_back(std::move(p));
  }
  if (cs.empty()) return nullptr;
  if (cs.size() == 1) return cs[0];
  return make_inner(n->kind, std::move(cs));
}

}  // namespace

PQTree PQTree::null_tree() { return PQTree(nullptr); }

PQTree PQTree::leaf(const Id& id) { return PQTree(make_leaf(id)); }

PQTree PQTree::universal(const IdSet& leaves) {
  if (leaves.empty())
    throw std::invalid_argument("universal: empty leaf set");
  if (leaves.size() == 1) return leaf(*leaves.begin());
  std::vector<NodePtr> cs;
  for (const auto& id : leaves) cs.push_back(make_leaf(id));
  return PQTree(make_inner(Kind::P, std::move(cs)));
}

PQTree PQTree::p_node(const std::vector<PQTree>& children) {
  std::vector<NodePtr> cs;
  for (const auto& c : children) {
    if (c.is_null()) throw std::invalid_argument("p_node: null child");
    cs.push_back(c.root_);
  }
  return PQTree(canonicalize(make_inner(Kind::P, std::move(cs))));
}

PQTree PQTree::q_node(const std::vector<PQTree>& children) {
  std::vector<NodePtr> cs;
  for (const auto& c : children) {
    if (c.is_null()) throw std::invalid_argument("q_node: null child");
    cs.push_back(c.root_);
  }
  return PQTree(canonicalize(make_inner(Kind::Q, std::move(cs))));
}

PQTree PQTree::from_constraints(const IdSet& ground,
                                const std::vector<IdSet>& constraints) {
  PQTree t = universal(ground);
  for (const auto& c : constraints) {
    t = t.reduce(c);
    if (t.is_null()) return t;
  }
  return t;
}

const IdSet& PQTree::leaves() const {
  static const IdSet kEmpty;
  return root_ ? root_->leaves : kEmpty;
}

PQTree PQTree::reduce(const IdSet& subset) const {
  if (is_null()) throw std::invalid_argument("reduce: null tree");
  if (overlap_count(root_->leaves, subset) != subset.size())
    throw std::invalid_argument("reduce: subset not within the leaf set");
  if (subset.size() <= 1) return *this;
  NodePtr r = reduce_at(root_, subset);
  if (!r) return null_tree();
  return PQTree(canonicalize(r));
}

PQTree PQTree::project(const IdSet& keep) const {
  if (keep.empty()) throw std::invalid_argument("project: empty keep set");
  if (is_null()) return *this;
  NodePtr p = project_node(root_, keep);
  if (!p)
    throw std::invalid_argument("project: keep set disjoint from the leaf set");
  return PQTree(canonicalize(p));
}

bool PQTree::represents(const Order& order) const {
  if (is_null()) return false;
  if (order.size() != root_->leaves.size()) return false;
  std::map<Id, std::size_t> pos;
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (!root_->leaves.count(order[j])) return false;
    if (!pos.emplace(order[j], j).second) return false;
  }
  Interval iv;
  return interval_of(root_, pos, iv);
}

bool PQTree::satisfies(const Order& order) const {
  if (is_null()) return false;
  Order restricted;
  for (const auto& x : order)
    if (root_->leaves.count(x)) restricted.push_back(x);
  return represents(restricted);
}

std::uint64_t PQTree::order_count() const {
  if (is_null()) return 0;
  return count_node(root_);
}

std::vector<Order> PQTree::enumerate_orders(std::uint64_t cap) const {
  if (is_null()) return {};
  if (order_count() > cap)
    throw std::runtime_error("enumerate_orders: cap exceeded");
  auto out = enumerate_node(root_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<IdSet> PQTree::to_constraints() const {
  if (is_null()) throw std::invalid_argument("to_constraints: null tree");
  std::vector<IdSet> all, ignored;
  all.push_back(root_->leaves);
  collect_constraints(root_, true, /*all_nodes=*/true, &all, &all);
  return all;
}

std::pair<std::vector<IdSet>, std::vector<IdSet>> PQTree::split_constraints()
    const {
  if (is_null()) throw std::invalid_argument("split_constraints: null tree");
  std::vector<IdSet> t1, t2;
  collect_constraints(root_, true, /*all_nodes=*/false, &t1, &t2);
  return {std::move(t1), std::move(t2)};
}

std::pair<PQTree, PQTree> PQTree::laminar_split() const {
  auto [c1, c2] = split_constraints();
  return {from_constraints(leaves(), c1), from_constraints(leaves(), c2)};
}

std::string PQTree::to_string() const {
  if (is_null()) return "null";
  std::string out;
  print_node(root_, out);
  return out;
}

bool PQTree::operator==(const PQTree& other) const {
  if (is_null() || other.is_null()) return is_null() == other.is_null();
  return node_equal(root_, other.root_);
}

}  // namespace hvseg
