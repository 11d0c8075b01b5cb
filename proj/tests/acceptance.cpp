// Acceptance gate: each criterion prints exactly one PASS/FAIL line.
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "hvseg/gen.hpp"
#include "hvseg/oracle.hpp"
#include "hvseg/realize.hpp"
#include "hvseg/reduce.hpp"
#include "hvseg/solve.hpp"
#include "support.hpp"

using namespace hvseg;
using namespace testsupport;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok,
            const std::string& note = "") {
  std::cout << (ok ? "PASS" : "FAIL") << "  [" << idx << "] " << name;
  if (!note.empty()) std::cout << " (" << note << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- 1: exhaustive 3x3 agreement with the brute-force decider ----------
bool exhaustive_3x3(std::string& note) {
  auto t0 = Clock::now();
  std::vector<Id> hs{"h1", "h2", "h3"}, vs{"v1", "v2", "v3"};
  for (int mask = 0; mask < (1 << 9); ++mask) {
    SegInstance inst;
    inst.horizontals = hs;
    inst.verticals = vs;
    inst.sigma_h = hs;
    for (int bit = 0; bit < 9; ++bit)
      if (mask & (1 << bit)) inst.edges.emplace(hs[bit / 3], vs[bit % 3]);
    bool expected = brute_sfhvseg(inst).yes;
    auto got = solve_sfhvseg(inst, {});
    if (got.has_value() != expected) {
      note = "disagreement at mask " + std::to_string(mask);
      return false;
    }
    if (got && !check_witness(inst, *got).ok) {
      note = "bad witness at mask " + std::to_string(mask);
      return false;
    }
  }
  double dt = seconds_since(t0);
  std::ostringstream os;
  os << "512 instances, " << dt << " s";
  note = os.str();
  return dt < 60.0;
}

// ---- 2: reductions preserve brute-force status; witnesses pull back ----
bool reduction_chains(std::string& note) {
  SplitMix64 rng(20260826);
  int done = 0;

  for (int trial = 0; trial < 1000; ++trial, ++done) {
    auto seg = random_seg(rng, 3, 3);
    bool yes = brute_sfhvseg(seg).yes;
    auto r = hvseg_to_tlp(seg);
    if (brute_tlp(r.target).yes != yes) {
      note = "hvseg->tlp status broke at trial " + std::to_string(trial);
      return false;
    }
    if (yes) {
      auto w = solve_tlp(r.target, {});
      if (!w || !check_witness(seg, r.pull_witness(*w)).ok) {
        note = "hvseg->tlp witness broke at trial " + std::to_string(trial);
        return false;
      }
    }
  }

  for (int trial = 0; trial < 1000; ++trial, ++done) {
    auto li = random_level(rng, 3, 2);
    bool yes = brute_tlp(li).yes;

    auto m = tlp_to_matching(li);
    auto s = tlp_split_levels(m.target);
    auto q = tlp_to_seqpq(li);
    auto h = tlp_to_hvseg(li);
    if (brute_tlp(m.target).yes != yes || brute_tlp(s.target).yes != yes ||
        brute_seqpq(q.target).yes != yes ||
        brute_sfhvseg(h.target, 100000000ULL).yes != yes) {
      note = "tlp chain status broke at trial " + std::to_string(trial);
      return false;
    }
    if (yes) {
      auto wm = solve_tlp(m.target, {});
      auto ws = solve_tlp(s.target, {});
      auto wq = solve_seqpq(q.target, {});
      auto wh = solve_sfhvseg(h.target, {});
      bool ok = wm && check_witness(li, m.pull_witness(*wm)).ok && ws &&
                check_witness(m.target, s.pull_witness(*ws)).ok && wq &&
                check_witness(li, q.pull_witness(*wq)).ok && wh &&
                check_witness(li, h.pull_witness(*wh)).ok;
      if (!ok) {
        note = "tlp chain witness broke at trial " + std::to_string(trial);
        return false;
      }
    }
  }

  for (int trial = 0; trial < 1000; ++trial, ++done) {
    auto si = random_seqpq(rng, 6, 3);
    bool yes = brute_seqpq(si).yes;
    auto r = seqpq_to_tlp(si);
    if (brute_tlp(r.target).yes != yes) {
      note = "seqpq->tlp status broke at trial " + std::to_string(trial);
      return false;
    }
    if (yes) {
      auto w = solve_tlp(r.target, {});
      if (!w || !check_witness(si, r.pull_witness(*w)).ok) {
        note = "seqpq->tlp witness broke at trial " + std::to_string(trial);
        return false;
      }
    }
  }

  note = std::to_string(done) + " instances";
  return true;
}

// ---- 3: PQ-tree semantics against the permutation filter ---------------
bool tree_matches_filter(const IdSet& ground, const std::vector<IdSet>& cons,
                         std::string& note) {
  auto expected = permutation_filter(ground, cons);
  std::sort(expected.begin(), expected.end());
  auto tree = PQTree::from_constraints(ground, cons);
  if (expected.empty() != tree.is_null()) {
    note = "null-tree status mismatch";
    return false;
  }
  if (tree.is_null()) return true;
  auto got = tree.enumerate_orders(100000);
  std::sort(got.begin(), got.end());
  if (got != expected) {
    note = "order family mismatch";
    return false;
  }
  return true;
}

bool pq_semantics(std::string& note) {
  std::vector<Id> ground{"a", "b", "c", "d"};
  IdSet gset(ground.begin(), ground.end());
  std::vector<IdSet> subsets;
  for (int mask = 0; mask < 16; ++mask) {
    IdSet s;
    for (int b = 0; b < 4; ++b)
      if (mask & (1 << b)) s.insert(ground[static_cast<std::size_t>(b)]);
    if (s.size() >= 2) subsets.push_back(s);
  }
  // every family of at most 4 constraints (with repetition), exhaustively
  std::vector<IdSet> family;
  std::function<bool(std::size_t)> rec = [&](std::size_t depth) {
    if (!tree_matches_filter(gset, family, note)) return false;
    if (depth == 4) return true;
    for (const auto& s : subsets) {
      family.push_back(s);
      if (!rec(depth + 1)) return false;
      family.pop_back();
    }
    return true;
  };
  if (!rec(0)) return false;

  SplitMix64 rng(42424242);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 2 + static_cast<int>(rng.below(5));
    std::vector<Id> g2;
    for (int i = 0; i < n; ++i) g2.push_back(std::string(1, 'a' + i));
    if (!tree_matches_filter(IdSet(g2.begin(), g2.end()),
                             random_constraints(rng, g2, 4), note)) {
      note += " at random trial " + std::to_string(trial);
      return false;
    }
  }

  auto fixture = PQTree::from_constraints(fix_pq_ground(),
                                          fix_pq_constraints());
  if (fixture.is_null()) {
    note = "grouping fixture collapsed to the null tree";
    return false;
  }
  auto [f1, f2] = fixture.split_constraints();
  std::sort(f1.begin(), f1.end());
  std::sort(f2.begin(), f2.end());
  if (f1 != std::vector<IdSet>{{"a", "b"}, {"a", "b", "c"}, {"d", "e"}} ||
      f2 != std::vector<IdSet>{{"c", "d"}}) {
    note = "laminar halves differ from the expected families";
    return false;
  }
  note = "exhaustive depth 4 + 10000 random families + fixture";
  return true;
}

// ---- 4: pairwise consistency == mergeability == global extension -------
bool order_merge_equivalence(std::string& note) {
  SplitMix64 rng(1618);
  for (int trial = 0; trial < 10000; ++trial) {
    int n = 2 + static_cast<int>(rng.below(6));  // |X| <= 7
    int k = 1 + static_cast<int>(rng.below(3));
    std::vector<Id> all;
    for (int e = 0; e < n; ++e) all.push_back("x" + std::to_string(e + 1));
    // contiguous random lifespans, every tree non-empty
    std::vector<std::pair<int, int>> span(static_cast<std::size_t>(n));
    for (auto& [lo, hi] : span) {
      lo = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
      hi = lo + static_cast<int>(
                    rng.below(static_cast<std::uint64_t>(k - lo + 1)));
    }
    for (int t = 1; t <= k; ++t) {
      auto& s = span[static_cast<std::size_t>((t - 1) % n)];
      s.first = std::min(s.first, t);
      s.second = std::max(s.second, t);
    }
    SeqPQInstance si;
    std::vector<Order> orders;
    for (int t = 1; t <= k; ++t) {
      Order local;
      for (int e = 0; e < n; ++e)
        if (span[static_cast<std::size_t>(e)].first <= t &&
            t <= span[static_cast<std::size_t>(e)].second)
          local.push_back(all[static_cast<std::size_t>(e)]);
      si.trees.push_back(PQTree::universal(
          IdSet(local.begin(), local.end())));
      for (std::size_t i = local.size(); i > 1; --i)
        std::swap(local[i - 1], local[rng.below(i)]);
      orders.push_back(local);
    }

    bool consistent = check_order_chain(si, orders).ok;
    bool mergeable = try_merge_orders(orders).has_value();

    bool extension = false;
    Order perm = all;
    std::sort(perm.begin(), perm.end());
    do {
      bool ok = true;
      for (std::size_t t = 0; t < orders.size() && ok; ++t) {
        Order restricted;
        for (const auto& x : perm)
          if (si.trees[t].leaves().count(x)) restricted.push_back(x);
        ok = restricted == orders[t];
      }
      if (ok) {
        extension = true;
        break;
      }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (consistent != mergeable || mergeable != extension) {
      note = "divergence at trial " + std::to_string(trial);
      return false;
    }
  }
  note = "10000 trials";
  return true;
}

// ---- 5: cross pattern == geometric realization, exhaustively -----------
bool cross_equals_geometry(std::string& note) {
  long long checked = 0;
  for (int n_h = 1; n_h <= 4; ++n_h)
    for (int n_v = 1; n_v <= 4; ++n_v) {
      SegInstance base;
      for (int a = 0; a < n_h; ++a)
        base.horizontals.push_back("h" + std::to_string(a + 1));
      for (int b = 0; b < n_v; ++b)
        base.verticals.push_back("v" + std::to_string(b + 1));
      base.sigma_h = base.horizontals;

      int cells = n_h * n_v;
      Order perm0 = base.verticals;
      for (int mask = 0; mask < (1 << cells); ++mask) {
        SegInstance inst = base;
        for (int bit = 0; bit < cells; ++bit)
          if (mask & (1 << bit))
            inst.edges.emplace(base.horizontals[bit / n_v],
                               base.verticals[bit % n_v]);
        Order perm = perm0;
        do {
          bool by_cross = !find_cross(inst, perm).has_value();
          bool by_geometry = realize_segments(inst, perm).matches_edges();
          ++checked;
          if (by_cross != by_geometry) {
            note = "divergence on mask " + std::to_string(mask);
            return false;
          }
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
    }
  note = std::to_string(checked) + " (instance, order) pairs";
  return true;
}

// ---- 6: size bounds ------------------------------------------------------
bool size_bounds(std::string& note) {
  SplitMix64 rng(606);
  for (int trial = 0; trial < 500; ++trial) {
    auto seg = random_seg(rng, 5, 5);
    auto t = hvseg_to_tlp(seg).target;
    if (t.level.size() > seg.horizontals.size() * seg.verticals.size()) {
      note = "vertex bound broke at trial " + std::to_string(trial);
      return false;
    }
  }
  for (int trial = 0; trial < 500; ++trial) {
    auto si = random_seqpq(rng, 7, 4);
    auto d = seqpq_to_simpq(si);
    std::map<std::size_t, int> deg;
    for (const auto& a : d.arcs) {
      ++deg[a.source];
      ++deg[a.target];
    }
    for (const auto& [idx, dg] : deg)
      if (dg > 2) {
        note = "degree bound broke at trial " + std::to_string(trial);
        return false;
      }
  }
  note = "1000 instances";
  return true;
}

// ---- 7: scale smoke test -------------------------------------------------
bool scale_smoke(std::string& note) {
  auto inst = gen_arrangement(100, 100, 0.2, 7);
  auto t0 = Clock::now();
  auto w = solve_sfhvseg(inst, {});
  double dt = seconds_since(t0);
  std::ostringstream os;
  os << inst.edges.size() << " edges, " << dt << " s";
  note = os.str();
  if (!w) {
    note += "; expected yes";
    return false;
  }
  if (!check_witness(inst, *w).ok) {
    note += "; witness rejected";
    return false;
  }
  return dt < 10.0;
}

// ---- 8: fixture answers, re-derived by the brute-force decider ----------
bool fixtures(std::string& note) {
  auto cross = fix_cross();
  if (!brute_sfhvseg(cross).yes || !solve_sfhvseg(cross, {})) {
    note = "semi-fixed cross fixture";
    return false;
  }
  cross.sigma_v = Order{"a", "b", "c"};
  auto fixed = recognize_fixed_both(cross);
  if (fixed.yes || fixed.cross != std::pair<Id, Id>{"h2", "b"}) {
    note = "fully-fixed cross fixture";
    return false;
  }
  if (brute_sfhvseg(fix_triangle()).yes ||
      solve_sfhvseg(fix_triangle(), {})) {
    note = "triangle fixture";
    return false;
  }
  auto one = solve_sfhvseg(fix_1(), {});
  if (!brute_sfhvseg(fix_1()).yes || !one || one->sigma_v != Order{"v1"}) {
    note = "single-crossing fixture";
    return false;
  }
  return true;
}

bool guard(const std::function<bool(std::string&)>& f, std::string& note) {
  try {
    return f(note);
  } catch (const std::exception& e) {
    note = std::string("exception: ") + e.what();
    return false;
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const Criterion criteria[] = {
      {"exhaustive 3x3 solver/oracle agreement", exhaustive_3x3},
      {"reduction chains preserve status and witnesses", reduction_chains},
      {"PQ-tree semantics match the permutation filter", pq_semantics},
      {"order merge equivalence", order_merge_equivalence},
      {"cross pattern equals geometry", cross_equals_geometry},
      {"size bounds", size_bounds},
      {"scale smoke test 100x100", scale_smoke},
      {"fixture answers", fixtures},
  };
  int idx = 0;
  for (const auto& c : criteria) {
    std::string note;
    bool ok = guard(c.run, note);
    report(++idx, c.name, ok, note);
  }
  return failures == 0 ? 0 : 1;
}
