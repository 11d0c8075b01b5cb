#include "hvseg/solve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "hvseg/reduce.hpp"

namespace hvseg {

namespace {

std::optional<Order> topo_merge(const std::vector<Order>& orders) {
  std::map<Id, IdSet> succ;
  std::map<Id, int> indeg;
  for (const auto& o : orders)
    for (const auto& x : o) {
      succ.emplace(x, IdSet{});
      indeg.emplace(x, 0);
    }
  for (const auto& o : orders)
    for (std::size_t j = 1; j < o.size(); ++j)
      if (succ[o[j - 1]].insert(o[j]).second) ++indeg[o[j]];
  IdSet ready;
  for (const auto& [x, d] : indeg)
    if (d == 0) ready.insert(x);
  Order out;
  while (!ready.empty()) {
    Id x = *ready.begin();  // smallest id first, for reproducibility
    ready.erase(ready.begin());
    out.push_back(x);
    for (const auto& y : succ[x])
      if (--indeg[y] == 0) ready.insert(y);
  }
  if (out.size() != indeg.size()) return std::nullopt;
  return out;
}

// Incremental membership filter for growing prefixes: after a sequence of
// successful push() calls with distinct leaves x1..xk, some order represented
// by the tree starts with x1..xk; push() returns false (and changes nothing)
// when no represented order does. pop() undoes the latest push.
//
// State is the standard left-to-right reading of a tree arrangement: the
// "open" nodes, those whose leaves are partly but not fully consumed, form a
// chain from the root (the spine). A P-node finishes each child before
// starting the next; a Q-node additionally walks its children in one
// direction, committed when the node is first entered (the first consumed
// leaf of a Q-subtree lies in an end child). Pushing x closes everything on
// the spine below the fork with x's root path, which is only allowed once
// those nodes are fully consumed.
class PrefixChecker {
 public:
  explicit PrefixChecker(const PQTree& tree) {
    if (!tree.is_null()) index(tree.root().get(), nullptr);
  }

  bool push(const Id& x) {
    const Node* lf = leaf_.at(x);
    path_.clear();
    for (const Node* n = lf; n != nullptr; n = parent_.at(n))
      path_.push_back(n);
    std::reverse(path_.begin(), path_.end());
    // open prefix of the path; anything below is untouched or closed
    std::size_t k = 0;
    while (k < path_.size() && state_[path_[k]].status == kOpen) ++k;
    if (k < path_.size() && state_[path_[k]].status == kClosed) return false;
    // the fork: spine nodes below it must already be fully consumed
    for (std::size_t j = k; j < spine_.size(); ++j)
      if (state_[spine_[j]].consumed != spine_[j]->leaves.size()) return false;
    if (k > 0 && path_[k - 1]->kind == PQTree::Kind::Q &&
        child_index_.at(path_[k]) != state_[path_[k - 1]].next)
      return false;
    for (std::size_t j = k; j + 1 < path_.size(); ++j)
      if (path_[j]->kind == PQTree::Kind::Q) {
        std::size_t idx = child_index_.at(path_[j + 1]);
        if (idx != 0 && idx + 1 != path_[j]->children.size()) return false;
      }
    // feasible: commit
    trail_.emplace_back();
    auto& undo = trail_.back();
    undo.spine = spine_;
    for (std::size_t j = k; j < spine_.size(); ++j) {
      undo.touched.push_back({spine_[j], state_[spine_[j]]});
      state_[spine_[j]].status = kClosed;
    }
    spine_.resize(k);
    for (const Node* n : path_) {
      undo.touched.push_back({n, state_[n]});
      ++state_[n].consumed;
    }
    if (k > 0 && path_[k - 1]->kind == PQTree::Kind::Q) {
      auto& st = state_[path_[k - 1]];
      st.next = static_cast<std::size_t>(
          static_cast<long>(st.next) + st.dir);
    }
    for (std::size_t j = k; j + 1 < path_.size(); ++j) {
      auto& st = state_[path_[j]];
      st.status = kOpen;
      if (path_[j]->kind == PQTree::Kind::Q) {
        std::size_t idx = child_index_.at(path_[j + 1]);
        st.dir = idx == 0 ? 1 : -1;
        st.next = static_cast<std::size_t>(static_cast<long>(idx) + st.dir);
      }
      spine_.push_back(path_[j]);
    }
    state_[lf].status = kClosed;
    return true;
  }

  void pop() {
    auto& undo = trail_.back();
    for (auto it = undo.touched.rbegin(); it != undo.touched.rend(); ++it)
      state_[it->first] = it->second;
    spine_ = std::move(undo.spine);
    trail_.pop_back();
  }

 private:
  using Node = PQTree::Node;
  static constexpr int kUntouched = 0, kOpen = 1, kClosed = 2;

  struct State {
    int status = kUntouched;
    std::size_t consumed = 0;
    int dir = 0;            // Q-nodes: committed walking direction
    std::size_t next = 0;   // Q-nodes: child index expected next
  };

  struct Undo {
    std::vector<std::pair<const Node*, State>> touched;
    std::vector<const Node*> spine;
  };

  void index(const Node* n, const Node* parent) {
    parent_[n] = parent;
    state_[n] = State{};
    if (n->kind == PQTree::Kind::Leaf) {
      leaf_[n->leaf] = n;
      return;
    }
    for (std::size_t j = 0; j < n->children.size(); ++j) {
      child_index_[n->children[j].get()] = j;
      index(n->children[j].get(), n);
    }
  }

  std::unordered_map<const Node*, const Node*> parent_;
  std::unordered_map<Id, const Node*> leaf_;
  std::unordered_map<const Node*, std::size_t> child_index_;
  std::unordered_map<const Node*, State> state_;
  std::vector<const Node*> spine_;
  std::vector<const Node*> path_;
  std::vector<Undo> trail_;
};

// A required suborder: in every emitted order, the restriction to `domain`
// must equal `tau` (as a sequence).
struct PinTrack {
  const IdSet* domain;
  const Order* tau;
};

// Depth-first emission of the orders represented by a tree whose restrictions
// to the given track domains equal the track suborders, pruned leaf by leaf.
// Subtrees holding neither pinned nor downstream-relevant leaves are emitted
// in one canonical arrangement only: permuting them cannot change
// feasibility. The sink returns true to stop the search.
class OrderSearch {
 public:
  OrderSearch(const PQTree& tree, std::vector<PinTrack> tracks,
              const IdSet& downstream, std::uint64_t* budget,
              PrefixChecker* lookahead = nullptr,
              const IdSet* watched = nullptr)
      : tracks_(std::move(tracks)), pos_(tracks_.size(), 0),
        downstream_(downstream), budget_(budget), lookahead_(lookahead),
        watched_(watched) {
    if (!tree.is_null()) mark(tree.root());
  }

  bool run(const PQTree& tree, const std::function<bool(const Order&)>& sink) {
    sink_ = &sink;
    if (tree.is_null()) return false;
    return emit(tree.root(), [this] { return (*sink_)(out_); });
  }

 private:
  using NodePtr = PQTree::NodePtr;

  bool in_some_track(const Id& x) const {
    for (const auto& t : tracks_)
      if (t.domain->count(x)) return true;
    return false;
  }

  void mark(const NodePtr& n) {
    bool pinned = false, downstream = false;
    int ordered_children = 0;  // children holding pinned or downstream leaves
    if (n->kind == PQTree::Kind::Leaf) {
      pinned = in_some_track(n->leaf);
      downstream = downstream_.count(n->leaf) > 0;
    } else {
      for (const auto& c : n->children) {
        mark(c);
        pinned = pinned || has_pinned_[c.get()];
        downstream = downstream || has_downstream_[c.get()];
        if (has_pinned_[c.get()] || has_downstream_[c.get()])
          ++ordered_children;
      }
    }
    has_pinned_[n.get()] = pinned;
    has_downstream_[n.get()] = downstream;
    ordered_children_[n.get()] = ordered_children;
  }

  bool spend() {
    if (budget_ == nullptr) return true;
    if (*budget_ == 0)
      throw std::runtime_error("solver budget exceeded");
    --*budget_;
    return true;
  }

  bool emit(const NodePtr& n, const std::function<bool()>& cont) {
    spend();
    if (n->kind == PQTree::Kind::Leaf) {
      // The leaf must be the next expected element of every track whose
      // domain contains it.
      std::size_t advanced = 0;
      bool ok = true;
      for (std::size_t t = 0; t < tracks_.size(); ++t) {
        if (!tracks_[t].domain->count(n->leaf)) continue;
        if (pos_[t] >= tracks_[t].tau->size() ||
            (*tracks_[t].tau)[pos_[t]] != n->leaf) {
          ok = false;
          break;
        }
        ++pos_[t];
        ++advanced;
      }
      bool watched = ok && lookahead_ != nullptr && watched_->count(n->leaf);
      if (watched && !lookahead_->push(n->leaf)) ok = false;
      bool r = false;
      if (ok) {
        out_.push_back(n->leaf);
        r = cont();
        out_.pop_back();
        if (watched) lookahead_->pop();
      }
      for (std::size_t t = 0; advanced > 0 && t < tracks_.size(); ++t)
        if (tracks_[t].domain->count(n->leaf)) {
          --pos_[t];
          --advanced;
        }
      return r;
    }
    if (n->kind == PQTree::Kind::Q) {
      // reversal only matters when it can swap two children whose leaf
      // orders are constrained or visible downstream
      int dirs = ordered_children_[n.get()] >= 2 ? 2 : 1;
      for (int rev = 0; rev < dirs; ++rev)
        if (emit_q(n->children, 0, rev != 0, cont)) return true;
      return false;
    }
    std::vector<char> used(n->children.size(), 0);
    return emit_p(n->children, used, n->children.size(), false, cont);
  }

  bool emit_q(const std::vector<NodePtr>& cs, std::size_t idx, bool rev,
              const std::function<bool()>& cont) {
    if (idx == cs.size()) return cont();
    const NodePtr& c = cs[rev ? cs.size() - 1 - idx : idx];
    return emit(c, [&] { return emit_q(cs, idx + 1, rev, cont); });
  }

  // A child holding pinned leaves can only be placed now if it holds the
  // next expected element of some track: its pinned leaves are consumed
  // consecutively once entered.
  bool next_pin_inside(const NodePtr& c) const {
    for (std::size_t t = 0; t < tracks_.size(); ++t)
      if (pos_[t] < tracks_[t].tau->size() &&
          c->leaves.count((*tracks_[t].tau)[pos_[t]]) > 0)
        return true;
    return false;
  }

  bool emit_p(const std::vector<NodePtr>& cs, std::vector<char>& used,
              std::size_t left, bool after_blind,
              const std::function<bool()>& cont) {
    if (left == 0) return cont();
    // Pass 0: children holding pinned leaves, viable only when they hold the
    // next pinned element (deterministic: leaf sets are disjoint). Pass 1:
    // unpinned children visible downstream; their order relative to other
    // downstream-visible children counts, so each is a candidate — but a
    // placement directly after a child with no downstream leaves is skipped,
    // since swapping the two changes nothing observable. Pass 2: children
    // that are neither pinned nor visible are interchangeable; one
    // representative placement is enough.
    for (int pass = 0; pass < 3; ++pass) {
      for (std::size_t j = 0; j < cs.size(); ++j) {
        if (used[j]) continue;
        bool pinned = has_pinned_[cs[j].get()];
        bool down = has_downstream_[cs[j].get()];
        bool wanted = pass == 0   ? (pinned && next_pin_inside(cs[j]))
                      : pass == 1 ? (!pinned && down && !after_blind)
                                  : (!pinned && !down);
        if (!wanted) continue;
        used[j] = 1;
        bool r = emit(cs[j], [&, blind = !down] {
          return emit_p(cs, used, left - 1, blind, cont);
        });
        used[j] = 0;
        if (r) return true;
        if (pass == 2) break;  // other invisible children are equivalent
      }
    }
    return false;
  }

  std::vector<PinTrack> tracks_;
  std::vector<std::size_t> pos_;
  const IdSet& downstream_;
  std::uint64_t* budget_;
  PrefixChecker* lookahead_;
  const IdSet* watched_;
  std::unordered_map<const PQTree::Node*, bool> has_pinned_;
  std::unordered_map<const PQTree::Node*, bool> has_downstream_;
  std::unordered_map<const PQTree::Node*, int> ordered_children_;
  Order out_;
  const std::function<bool(const Order&)>* sink_ = nullptr;
};

const IdSet kEmptyIdSet;

// Value clone of a subtree.
PQTree tree_of(const PQTree::NodePtr& n) {
  if (n->kind == PQTree::Kind::Leaf) return PQTree::leaf(n->leaf);
  std::vector<PQTree> cs;
  cs.reserve(n->children.size());
  for (const auto& c : n->children) cs.push_back(tree_of(c));
  return n->kind == PQTree::Kind::P ? PQTree::p_node(cs)
                                    : PQTree::q_node(cs);
}

// Every structurally distinct way to insert leaf x into the subtree at n.
// The union of the represented orders of the results is exactly: every
// represented order of the subtree, with x placed at every possible
// position. A slot between two consecutive leaves lies between two child
// blocks of their lowest common ancestor: a new P-child covers all such
// slots of a P-node at once, a Q-gap child covers one slot of a Q-node.
// Below the root only interior Q-gaps are emitted, and leaves emit nothing:
// a slot at the outer edge of a node's block is a between-blocks slot of
// some ancestor and is already covered there. The two end slots of the
// whole order surface only at the root.
void insert_everywhere(const PQTree::NodePtr& n, const Id& x,
                       std::vector<PQTree>* out, bool at_root = true) {
  if (n->kind == PQTree::Kind::Leaf) {
    if (at_root)
      out->push_back(PQTree::p_node({PQTree::leaf(n->leaf), PQTree::leaf(x)}));
    return;
  }
  std::vector<PQTree> cs;
  cs.reserve(n->children.size());
  for (const auto& c : n->children) cs.push_back(tree_of(c));
  if (n->kind == PQTree::Kind::P) {
    std::vector<PQTree> with_x = cs;
    with_x.push_back(PQTree::leaf(x));
    out->push_back(PQTree::p_node(with_x));
  } else {
    std::size_t lo = at_root ? 0 : 1;
    std::size_t hi = at_root ? cs.size() : cs.size() - 1;
    for (std::size_t g = lo; g <= hi; ++g) {
      std::vector<PQTree> with_x;
      with_x.reserve(cs.size() + 1);
      with_x.insert(with_x.end(), cs.begin(), cs.begin() + g);
      with_x.push_back(PQTree::leaf(x));
      with_x.insert(with_x.end(), cs.begin() + g, cs.end());
      out->push_back(PQTree::q_node(with_x));
    }
  }
  for (std::size_t i = 0; i < n->children.size(); ++i) {
    std::vector<PQTree> sub;
    insert_everywhere(n->children[i], x, &sub, false);
    for (auto& s : sub) {
      std::vector<PQTree> mod = cs;
      mod[i] = std::move(s);
      out->push_back(n->kind == PQTree::Kind::P ? PQTree::p_node(mod)
                                                : PQTree::q_node(mod));
    }
  }
}

// All leaf sets forced consecutive by the subtree at n (its implied
// consecutivity constraints): every internal node's full leaf set and every
// contiguous run of a Q-node's children. Returns n's own leaf set.
IdSet implied_sets(const PQTree::NodePtr& n, std::vector<IdSet>* out) {
  if (n->kind == PQTree::Kind::Leaf) return {n->leaf};
  std::vector<IdSet> cs;
  cs.reserve(n->children.size());
  IdSet all;
  for (const auto& c : n->children) {
    cs.push_back(implied_sets(c, out));
    all.insert(cs.back().begin(), cs.back().end());
  }
  out->push_back(all);
  if (n->kind == PQTree::Kind::Q)
    for (std::size_t len = 2; len < cs.size(); ++len)
      for (std::size_t s = 0; s + len <= cs.size(); ++s) {
        IdSet run;
        for (std::size_t i = s; i < s + len; ++i)
          run.insert(cs[i].begin(), cs[i].end());
        out->push_back(std::move(run));
      }
  return all;
}

// Smallest single PQ language containing every tree's language: keep the
// constraints the first tree implies that every other tree also forces. A
// set forced by all trees is implied by each of them, so candidates from
// the first tree alone are enough.
PQTree hull_of(std::vector<PQTree>&& ts) {
  if (ts.size() == 1) return std::move(ts[0]);
  std::vector<IdSet> cands;
  implied_sets(ts[0].root(), &cands);
  IdSet ground = ts[0].leaves();
  std::vector<IdSet> kept;
  for (auto& s : cands) {
    if (s.size() < 2 || s.size() >= ground.size()) continue;
    bool forced = true;
    for (std::size_t i = 1; i < ts.size() && forced; ++i)
      forced = ts[i].reduce(s) == ts[i];
    if (forced) kept.push_back(std::move(s));
  }
  return PQTree::from_constraints(ground, kept);
}

}  // namespace

Order merge_orders(const std::vector<Order>& per_tree) {
  auto merged = topo_merge(per_tree);
  if (!merged)
    throw std::runtime_error(
        "merge_orders: cyclic union relation (adjacent orders disagree on "
        "shared elements)");
  return *merged;
}

std::optional<Order> try_merge_orders(const std::vector<Order>& per_tree) {
  return topo_merge(per_tree);
}

ChainReport check_order_chain(const SeqPQInstance& instance,
                          const std::vector<Order>& per_tree) {
  if (per_tree.size() != instance.trees.size())
    throw std::invalid_argument("check_order_chain: wrong number of orders");
  for (std::size_t i = 0; i < per_tree.size(); ++i)
    if (!is_permutation_of(per_tree[i], instance.trees[i].leaves()))
      throw std::invalid_argument(
          "check_order_chain: order domain does not match the tree's leaf set");
  for (std::size_t i = 0; i < per_tree.size(); ++i)
    if (!instance.trees[i].represents(per_tree[i]))
      return {false, "property 1 violated at tree " + std::to_string(i + 1)};
  for (std::size_t i = 0; i + 1 < per_tree.size(); ++i) {
    std::map<Id, std::size_t> rank;
    for (std::size_t j = 0; j < per_tree[i].size(); ++j)
      rank[per_tree[i][j]] = j;
    Order shared_next;
    for (const auto& x : per_tree[i + 1])
      if (rank.count(x)) shared_next.push_back(x);
    for (std::size_t j = 1; j < shared_next.size(); ++j)
      if (rank.at(shared_next[j - 1]) > rank.at(shared_next[j]))
        return {false, "property 2 violated at pair (" + std::to_string(i + 1) +
                           ", " + std::to_string(i + 2) + ")"};
  }
  return {true, ""};
}

std::optional<OrderWitness> solve_seqpq(const SeqPQInstance& instance,
                                        const SolverConfig& config) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument("solve_seqpq: invalid instance: " +
                                report.summary());
  std::uint64_t budget = config.budget;
  std::uint64_t* budget_ptr = config.budget ? &budget : nullptr;

  const auto& trees = instance.trees;
  const std::size_t n = trees.size();
  if (n == 0) return OrderWitness{};

  // Shared elements between consecutive trees. Lifespans are contiguous, so
  // every element a tree shares with any later tree it also shares with its
  // immediate successor: all ordering information crossing boundary i is
  // carried by the suborder of boundary[i] elements.
  std::vector<IdSet> boundary(n);  // boundary[i]: shared by trees i and i+1
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (const auto& x : trees[i].leaves())
      if (trees[i + 1].leaves().count(x)) boundary[i].insert(x);

  // The next tree's projection onto the boundary; while enumerating orders
  // of tree i, emitted boundary prefixes are checked against it leaf by
  // leaf, so a suborder the next tree cannot take up is abandoned at the
  // earliest possible point instead of after a full order.
  std::vector<PQTree> next_proj(n);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!boundary[i].empty()) next_proj[i] = trees[i + 1].project(boundary[i]);

  // Whether trees i.. can be completed depends only on the boundary
  // suborder handed across, so refuted suborders are recorded globally and
  // never retried.
  std::vector<std::set<Order>> refuted(n);
  std::vector<Order> acc;
  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == n) return true;
    Order tau;
    std::vector<PinTrack> tracks;
    if (i > 0 && !boundary[i - 1].empty()) {
      for (const auto& x : acc.back())
        if (boundary[i - 1].count(x)) tau.push_back(x);
      tracks.push_back({&boundary[i - 1], &tau});
    }
    std::optional<PrefixChecker> lookahead;
    if (i + 1 < n && !boundary[i].empty()) lookahead.emplace(next_proj[i]);
    OrderSearch search(trees[i], std::move(tracks), boundary[i], budget_ptr,
                       lookahead ? &*lookahead : nullptr, &boundary[i]);
    return search.run(trees[i], [&](const Order& sigma) {
      Order proj;
      for (const auto& x : sigma)
        if (boundary[i].count(x)) proj.push_back(x);
      if (refuted[i].count(proj)) return false;
      acc.push_back(sigma);
      if (dfs(i + 1)) return true;
      acc.pop_back();
      refuted[i].insert(proj);
      return false;
    });
  };
  if (!dfs(0)) return std::nullopt;

  OrderWitness w;
  w.per_tree = std::move(acc);
  w.global = merge_orders(w.per_tree);
  return w;
}

std::optional<LevelWitness> solve_tlp(const LevelInstance& instance,
                                      const SolverConfig& config) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument("solve_tlp: invalid instance: " +
                                report.summary());
  auto r = tlp_to_seqpq(instance);
  auto w = solve_seqpq(r.target, config);
  if (!w) return std::nullopt;
  return r.pull_witness(*w);
}

std::optional<SegWitness> solve_sfhvseg(const SegInstance& instance,
                                        const SolverConfig& config) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument("solve_sfhvseg: invalid instance: " +
                                report.summary());
  // Degree-0 verticals carry no constraint; solve without them and append
  // them at the end of the witness.
  IdSet covered;
  for (const auto& [h, v] : instance.edges) covered.insert(v);
  SegInstance stripped = instance;
  stripped.sigma_v.reset();
  stripped.verticals.clear();
  std::vector<Id> floating;
  for (const auto& v : instance.verticals)
    (covered.count(v) ? stripped.verticals : floating).push_back(v);

  // A vertical order avoids crossings iff, level by level in sigma_h order,
  // the neighbors of the level's horizontal are consecutive among the
  // verticals whose lifespan covers the level. The achievable orders are
  // swept bottom-up as a set of PQ-trees, one front per level. Only the
  // suborder of the verticals shared with the NEXT level carries forward,
  // so each front is kept projected onto those survivors: a dying vertical
  // outside the neighbor block never constrains anyone (it can be threaded
  // past an inserted newborn on the block edge), so it is projected out
  // before newborns are inserted; a newborn seen by no later level can be
  // slipped into the elastic neighbor block at the end, so it is skipped
  // entirely; a dying neighbor must stay *through* the insertions (it pins
  // where the block sits among the survivors) and is projected out after.
  // Each projection maps one exact union of languages to another, so an
  // empty front still means "no", while deduplication collapses fronts
  // that would otherwise fragment over the positions of dying verticals.
  //
  // The union can still grow exponentially when many verticals coexist, so
  // the sweep is first run as a beam search: fronts over a size cap keep
  // only the trees representing the most orders. Every kept tree's language
  // is a subset of the achievable set, so a completed capped sweep is a
  // sound "yes" and its witness is genuine; a failed capped sweep that
  // never pruned is a sound "no"; only a failed sweep that did prune is
  // inconclusive and escalates, ending at the uncapped exact sweep.
  std::uint64_t budget = config.budget;
  std::uint64_t* budget_ptr = config.budget ? &budget : nullptr;
  auto spend = [&] {
    if (config.budget == 0) return;
    if (budget == 0) throw std::runtime_error("solver budget exceeded");
    --budget;
  };

  std::map<Id, std::size_t> hpos;
  for (std::size_t i = 0; i < instance.sigma_h.size(); ++i)
    hpos[instance.sigma_h[i]] = i;
  std::map<std::size_t, IdSet> nbrs;  // constraint levels, bottom-up
  std::map<Id, std::size_t> first, last;
  for (const auto& [h, v] : stripped.edges) {
    std::size_t li = hpos.at(h);
    nbrs[li].insert(v);
    auto [it, fresh] = first.emplace(v, li);
    if (!fresh) it->second = std::min(it->second, li);
    auto [jt, fresh2] = last.emplace(v, li);
    if (!fresh2) jt->second = std::max(jt->second, li);
  }

  const std::size_t m = nbrs.size();
  std::vector<IdSet> nbs(m), alives(m), ins(m), outs(m), n_olds(m);
  std::vector<Order> born(m);  // always neighbors: a lifespan starts at an edge
  {
    std::size_t k = 0;
    for (const auto& [li, nb] : nbrs) {
      nbs[k] = nb;
      for (const auto& [v, f] : first)
        if (f <= li && last.at(v) >= li) alives[k].insert(v);
      ++k;
    }
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (k > 0)
      for (const auto& v : alives[k])
        if (alives[k - 1].count(v)) ins[k].insert(v);
    if (k + 1 < m)
      for (const auto& v : alives[k])
        if (alives[k + 1].count(v)) outs[k].insert(v);
    for (const auto& v : nbs[k])
      if (ins[k].count(v)) n_olds[k].insert(v);
    for (const auto& v : alives[k])
      if (!ins[k].count(v)) born[k].push_back(v);
  }

  // Base-2 log of the number of represented orders; ranks trees by how
  // permissive they are without the overflow of an exact count.
  auto log_orders = [](const PQTree& t) {
    std::function<double(const PQTree::NodePtr&)> go =
        [&](const PQTree::NodePtr& n) -> double {
      if (n->kind == PQTree::Kind::Leaf) return 0.0;
      double s = n->kind == PQTree::Kind::Q
                     ? 1.0
                     : std::lgamma(double(n->children.size()) + 1.0) /
                           std::log(2.0);
      for (const auto& c : n->children) s += go(c);
      return s;
    };
    return t.is_null() ? 0.0 : go(t.root());
  };

  // Entries whose forward information is empty (no vertical reaches the
  // next level) are all equivalent; a single null-tree marker stands in.
  struct Entry {
    PQTree tree;  // over outs[k]; null marker when outs[k] is empty
    std::size_t parent;
  };

  // One bottom-up sweep. Three regimes: hull mode folds every front into
  // the single smallest PQ language containing it (a superset, so an empty
  // front is still an exact "no" but a completed sweep only *suggests*
  // "yes"); capped mode cuts any front or newborn-insertion stage above the
  // cap back to the most permissive trees and sets *pruned; cap == 0 keeps
  // the fronts exact.
  auto sweep = [&](std::size_t cap, bool hull,
                   bool* pruned) -> std::optional<std::vector<std::vector<Entry>>> {
    auto shrink = [&](std::vector<PQTree>* v) {
      if (v->size() <= 1) return;
      if (hull) {
        PQTree h = hull_of(std::move(*v));
        v->clear();
        v->push_back(std::move(h));
        return;
      }
      if (cap == 0 || v->size() <= cap) return;
      std::stable_sort(v->begin(), v->end(),
                       [&](const PQTree& a, const PQTree& b) {
                         return log_orders(a) > log_orders(b);
                       });
      v->resize(cap);
      *pruned = true;
    };
    // All ways to add the leaves xs to base, one at a time, keeping block
    // (which grows with them) consecutive throughout. Exact when uncapped:
    // any target order with the final block consecutive stays
    // block-consecutive when the not-yet-inserted leaves (all inside the
    // block) are removed from it.
    auto staged_insert = [&](PQTree base, IdSet block, const Order& xs) {
      std::vector<PQTree> stage = {std::move(base)};
      for (const auto& x : xs) {
        block.insert(x);
        std::vector<PQTree> next;
        std::set<std::string> stage_seen;
        for (const auto& s : stage) {
          std::vector<PQTree> alts;
          insert_everywhere(s.root(), x, &alts);
          for (auto& a : alts) {
            spend();
            PQTree r = block.size() > 1 ? a.reduce(block) : std::move(a);
            if (r.is_null()) continue;
            if (stage_seen.insert(r.to_string()).second)
              next.push_back(std::move(r));
          }
        }
        stage = std::move(next);
        shrink(&stage);
        if (stage.empty()) break;
      }
      return stage;
    };

    std::vector<std::vector<Entry>> layers(m);
    for (std::size_t k = 0; k < m; ++k) {
      std::vector<Entry> cur;
      std::set<std::string> seen;
      bool marker = false;
      auto add = [&](PQTree t, std::size_t parent) {
        spend();
        if (t.is_null()) {
          if (!marker) {
            marker = true;
            cur.push_back({PQTree(), parent});
          }
          return;
        }
        if (seen.insert(t.to_string()).second)
          cur.push_back({std::move(t), parent});
      };
      std::size_t nparents = k == 0 ? 1 : layers[k - 1].size();
      for (std::size_t p = 0; p < nparents; ++p) {
        if (ins[k].empty()) {
          // fresh block: nothing carries over from below
          if (outs[k].empty())
            add(PQTree(), p);
          else
            add(PQTree::from_constraints(alives[k], {nbs[k]}).project(outs[k]),
                p);
          continue;
        }
        PQTree t = layers[k - 1][p].tree;  // its ground is exactly ins[k]
        if (!n_olds[k].empty()) {
          t = t.reduce(n_olds[k]);
          if (t.is_null()) continue;
        }
        if (outs[k].empty()) {
          add(PQTree(), p);
          continue;
        }
        IdSet keep = n_olds[k];  // dying neighbors pin the block; keep them
        for (const auto& v : ins[k])
          if (outs[k].count(v)) keep.insert(v);
        Order newbies;
        for (const auto& x : born[k])
          if (outs[k].count(x)) newbies.push_back(x);
        if (keep.empty()) {
          // every vertical from below dies here; onward only the newborns
          // matter, and their block is internally free
          IdSet fresh(newbies.begin(), newbies.end());
          add(PQTree::from_constraints(fresh, {}), p);
          continue;
        }
        if (keep.size() < ins[k].size()) t = t.project(keep);
        bool trim = keep.size() + newbies.size() > outs[k].size();
        for (auto& s : staged_insert(std::move(t), n_olds[k], newbies))
          add(trim ? s.project(outs[k]) : std::move(s), p);
      }
      if (cur.empty()) return std::nullopt;
      if (cap != 0 && !marker && cur.size() > cap) {
        std::stable_sort(cur.begin(), cur.end(),
                         [&](const Entry& a, const Entry& b) {
                           return log_orders(a.tree) > log_orders(b.tree);
                         });
        cur.resize(cap);
        *pruned = true;
      }
      layers[k] = std::move(cur);
    }
    return layers;
  };

  // Walk a completed sweep's parent chain back down, fixing one full order
  // per level, top level first. A level's order must have the level's
  // neighbor block consecutive and agree with the already-fixed level above
  // on the shared verticals, which is what makes a completed walk a genuine
  // witness no matter how the fronts were approximated. Candidates are
  // enumerated over the level's own constraint tree with the parent's tree
  // as a prefix lookahead on the shared verticals, so a candidate's lower
  // suborder always lies in the parent's language; that source is complete
  // for the one-level transition. A candidate whose suborder the level
  // below still cannot extend is rejected and the enumeration continues:
  // with exact fronts the first candidate always goes through, while hull
  // fronts can overclaim and need this cross-level backtracking, bounded
  // by a node allowance. Pruned fronts can instead underclaim, so only for
  // them a second pass drops the lookahead (any block-consecutive order
  // that agrees above still yields a genuine witness if the walk
  // completes).
  struct WalkCutoff {};
  auto extract = [&](const std::vector<std::vector<Entry>>& layers,
                     bool strict, bool fallback) -> std::optional<Order> {
    if (m == 0) return Order{};
    std::vector<Order> per_level(m);
    std::vector<std::set<std::string>> refuted(m);
    std::size_t allowance = strict ? std::size_t(-1) : 100000;
    auto key = [](const Order& o) {
      std::string s;
      for (const auto& v : o) {
        s += v;
        s += '\x01';
      }
      return s;
    };
    std::function<bool(int, const Order&, std::size_t)> walk =
        [&](int k, const Order& tau, std::size_t idx) -> bool {
      if (k < 0) return true;
      if (refuted[k].count(key(tau))) return false;
      const Entry& e = layers[k][idx];
      // A full candidate order of alive[k] is kept iff the level below can
      // in turn extend its shared suborder.
      auto attempt = [&](const Order& sigma) -> bool {
        if (allowance == 0) throw WalkCutoff{};
        --allowance;
        Order tau2;
        for (const auto& v : sigma)
          if (ins[k].count(v)) tau2.push_back(v);
        if (!walk(k - 1, tau2, e.parent)) return false;
        per_level[k] = sigma;
        return true;
      };
      PQTree level_tree = PQTree::from_constraints(alives[k], {nbs[k]});
      auto scan = [&](bool with_lookahead) -> bool {
        Order part;
        IdSet dom;
        for (const auto& v : tau)
          if (dom.insert(v).second) part.push_back(v);
        std::vector<PinTrack> tracks;
        if (!part.empty()) tracks.push_back({&dom, &part});
        std::optional<PrefixChecker> look;
        if (with_lookahead) look.emplace(layers[k - 1][e.parent].tree);
        OrderSearch search(level_tree, std::move(tracks), ins[k], budget_ptr,
                           look ? &*look : nullptr,
                           look ? &ins[k] : nullptr);
        return search.run(level_tree,
                          [&](const Order& s) { return attempt(s); });
      };
      bool found = !ins[k].empty() && scan(true);
      if (!found && (ins[k].empty() || fallback)) found = scan(false);
      if (!found) refuted[k].insert(key(tau));
      return found;
    };
    bool done;
    try {
      done = walk(int(m) - 1, Order{}, 0);
    } catch (const WalkCutoff&) {
      done = false;
    }
    if (!done) {
      if (strict)
        throw std::logic_error("solve_sfhvseg: sweep front inconsistent");
      return std::nullopt;
    }
    return merge_orders(per_level);
  };

  // Escalation ladder: the hull sweep settles most instances outright; if
  // it completes but its witness walk dead-ends, retry with real (capped,
  // then exact) tree-set fronts.
  struct Plan {
    std::size_t cap;
    bool hull;
  };
  SegWitness result;
  for (Plan plan : {Plan{0, true}, Plan{8, false}, Plan{96, false},
                    Plan{0, false}}) {
    bool pruned = false;
    auto layers = sweep(plan.cap, plan.hull, &pruned);
    if (!layers) {
      if (!pruned) return std::nullopt;  // never approximated: exact "no"
      continue;
    }
    auto sigma = extract(*layers, /*strict=*/!plan.hull,
                         /*fallback=*/!plan.hull && plan.cap != 0);
    if (sigma) {
      result.sigma_v = std::move(*sigma);
      for (const auto& v : floating) result.sigma_v.push_back(v);
      return result;
    }
  }
  throw std::logic_error("solve_sfhvseg: exact sweep not conclusive");
}

FixedBothResult recognize_fixed_both(const SegInstance& instance) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument("recognize_fixed_both: invalid instance: " +
                                report.summary());
  if (!instance.sigma_v)
    throw std::invalid_argument("recognize_fixed_both: sigma_v missing");
  FixedBothResult r;
  r.cross = find_cross(instance, *instance.sigma_v);
  r.yes = !r.cross.has_value();
  return r;
}

}  // namespace hvseg
