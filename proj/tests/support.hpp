#pragma once

#include <algorithm>
#include <vector>

#include "hvseg/core.hpp"
#include "hvseg/gen.hpp"

namespace testsupport {

using namespace hvseg;

// Reference semantics for consecutivity constraints, independent of PQTree:
// filter all permutations of the ground set.
inline std::vector<Order> permutation_filter(const IdSet& ground,
                                             const std::vector<IdSet>& cons) {
  Order perm(ground.begin(), ground.end());
  std::vector<Order> out;
  do {
    bool ok = true;
    for (const auto& s : cons) {
      std::size_t lo = perm.size(), hi = 0;
      for (std::size_t i = 0; i < perm.size(); ++i)
        if (s.count(perm[i])) {
          lo = std::min(lo, i);
          hi = std::max(hi, i);
        }
      if (!s.empty() && hi - lo + 1 != s.size()) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline SegInstance fix_1() {
  SegInstance i;
  i.horizontals = {"h1"};
  i.verticals = {"v1"};
  i.edges = {{"h1", "v1"}};
  i.sigma_h = {"h1"};
  return i;
}

inline SegInstance fix_cross() {
  SegInstance i;
  i.horizontals = {"h1", "h2", "h3"};
  i.verticals = {"a", "b", "c"};
  i.edges = {{"h1", "b"}, {"h2", "a"}, {"h2", "c"}, {"h3", "b"}};
  i.sigma_h = {"h1", "h2", "h3"};
  return i;
}

inline SegInstance fix_triangle() {
  SegInstance i;
  i.horizontals = {"h1", "h2", "h3", "h4", "h5"};
  i.verticals = {"a", "b", "c"};
  i.sigma_h = i.horizontals;
  i.edges = {{"h1", "a"}, {"h1", "b"}, {"h2", "b"}, {"h2", "c"},
             {"h3", "a"}, {"h3", "c"}, {"h4", "a"}, {"h4", "b"},
             {"h5", "b"}, {"h5", "c"}};
  return i;
}

inline IdSet fix_pq_ground() { return {"a", "b", "c", "d", "e"}; }

inline std::vector<IdSet> fix_pq_constraints() {
  return {{"a", "b"}, {"a", "b", "c"}, {"c", "d"}, {"d", "e"}};
}

// Random SegInstance; every vertical gets at least one edge so the level
// view is defined.
inline SegInstance random_seg(SplitMix64& rng, int max_h = 4, int max_v = 4) {
  SegInstance i;
  int n_h = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_h)));
  int n_v = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_v)));
  for (int a = 0; a < n_h; ++a)
    i.horizontals.push_back("h" + std::to_string(a + 1));
  for (int b = 0; b < n_v; ++b)
    i.verticals.push_back("v" + std::to_string(b + 1));
  i.sigma_h = i.horizontals;
  for (const auto& v : i.verticals) {
    i.edges.emplace(i.horizontals[rng.below(i.horizontals.size())], v);
    for (const auto& h : i.horizontals)
      if (rng.below(3) == 0) i.edges.emplace(h, v);
  }
  return i;
}

namespace detail {

// Random laminar family over s via recursive random bipartition.
inline void laminar_parts(SplitMix64& rng, const std::vector<Id>& s,
                          std::vector<IdSet>& out) {
  if (s.size() < 2) return;
  if (rng.below(2) == 0) out.emplace_back(s.begin(), s.end());
  std::vector<Id> left, right;
  for (const auto& x : s) (rng.below(2) == 0 ? left : right).push_back(x);
  if (left.empty() || right.empty()) return;
  laminar_parts(rng, left, out);
  laminar_parts(rng, right, out);
}

}  // namespace detail

// Random proper level instance with laminar per-level constraints.
inline LevelInstance random_level(SplitMix64& rng, int max_levels = 4,
                                  int max_width = 3) {
  LevelInstance inst;
  inst.num_levels =
      1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_levels)));
  std::vector<std::vector<Id>> per_level(
      static_cast<std::size_t>(inst.num_levels));
  int serial = 0;
  for (int lvl = 1; lvl <= inst.num_levels; ++lvl) {
    int width =
        1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_width)));
    for (int w = 0; w < width; ++w) {
      Id v = "u" + std::to_string(++serial);
      inst.level[v] = lvl;
      per_level[static_cast<std::size_t>(lvl - 1)].push_back(v);
    }
  }
  for (int lvl = 1; lvl < inst.num_levels; ++lvl)
    for (const auto& a : per_level[static_cast<std::size_t>(lvl - 1)])
      for (const auto& b : per_level[static_cast<std::size_t>(lvl)])
        if (rng.below(3) == 0) inst.edges.emplace(a, b);
  for (const auto& lv : per_level) {
    std::vector<IdSet> fam;
    detail::laminar_parts(rng, lv, fam);
    std::sort(fam.begin(), fam.end());
    fam.erase(std::unique(fam.begin(), fam.end()), fam.end());
    inst.constraints.push_back(std::move(fam));
  }
  return inst;
}

// Random constraint family over a ground set (not necessarily laminar).
inline std::vector<IdSet> random_constraints(SplitMix64& rng,
                                             const std::vector<Id>& ground,
                                             int max_count) {
  std::vector<IdSet> cons;
  int count = static_cast<int>(rng.below(static_cast<std::uint64_t>(
      max_count + 1)));
  for (int c = 0; c < count; ++c) {
    IdSet s;
    for (const auto& x : ground)
      if (rng.below(2) == 0) s.insert(x);
    if (s.size() >= 2) cons.push_back(std::move(s));
  }
  return cons;
}

// Random SeqPQInstance with contiguous non-empty lifespans; trees with a
// satisfiable constraint family each (instance can still be a global no).
inline SeqPQInstance random_seqpq(SplitMix64& rng, int max_n = 6,
                                  int max_k = 3) {
  int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(
              max_n - 1)));
  int k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_k)));
  std::vector<Id> all;
  for (int e = 0; e < n; ++e) all.push_back("x" + std::to_string(e + 1));
  std::vector<std::pair<int, int>> span(static_cast<std::size_t>(n));
  for (int e = 0; e < n; ++e) {
    int lo = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    int hi = lo + static_cast<int>(
                      rng.below(static_cast<std::uint64_t>(k - lo + 1)));
    span[static_cast<std::size_t>(e)] = {lo, hi};
  }
  for (int t = 1; t <= k; ++t) {  // anchor so no tree is empty
    auto& s = span[static_cast<std::size_t>((t - 1) % n)];
    s.first = std::min(s.first, t);
    s.second = std::max(s.second, t);
  }
  SeqPQInstance inst;
  for (int t = 1; t <= k; ++t) {
    std::vector<Id> local;
    for (int e = 0; e < n; ++e)
      if (span[static_cast<std::size_t>(e)].first <= t &&
          t <= span[static_cast<std::size_t>(e)].second)
        local.push_back(all[static_cast<std::size_t>(e)]);
    IdSet ground(local.begin(), local.end());
    PQTree tree = PQTree::null_tree();
    do {
      tree = PQTree::from_constraints(ground,
                                      random_constraints(rng, local, 2));
    } while (tree.is_null());
    inst.trees.push_back(tree);
  }
  return inst;
}

}  // namespace testsupport
