#include "hvseg/oracle.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace hvseg {

namespace {

void require_factorial_within(std::size_t n, std::uint64_t cap,
                              const char* who) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (f > cap / i)
      throw std::runtime_error(std::string(who) + ": cap exceeded");
    f *= i;
  }
  if (f > cap) throw std::runtime_error(std::string(who) + ": cap exceeded");
}

}  // namespace

BruteResult brute_sfhvseg(const SegInstance& instance, std::uint64_t cap) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument("brute_sfhvseg: invalid instance: " +
                                report.summary());
  require_factorial_within(instance.verticals.size(), cap, "brute_sfhvseg");
  BruteResult r;
  Order perm = instance.verticals;
  std::sort(perm.begin(), perm.end());
  do {
    if (!find_cross(instance, perm)) r.witnesses.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  r.yes = !r.witnesses.empty();
  return r;
}

BruteLevelResult brute_tlp(const LevelInstance& instance, std::uint64_t cap) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument("brute_tlp: invalid instance: " +
                                report.summary());
  auto levels = level_sets(instance);

  // Edges grouped by their lower level; (lower, upper) per group.
  std::vector<std::vector<std::pair<Id, Id>>> up_edges(levels.size());
  for (const auto& [a, b] : instance.edges)
    up_edges[static_cast<std::size_t>(instance.level.at(a)) - 1].emplace_back(
        a, b);

  auto consecutive = [](const Order& order, const IdSet& s) {
    std::size_t lo = order.size(), hi = 0, hits = 0;
    for (std::size_t j = 0; j < order.size(); ++j)
      if (s.count(order[j])) {
        lo = std::min(lo, j);
        hi = std::max(hi, j);
        ++hits;
      }
    return hits == s.size() && (hits == 0 || hi - lo + 1 == hits);
  };

  auto level_ok = [&](std::size_t i, const Order& order) {
    if (i < instance.constraints.size())
      for (const auto& s : instance.constraints[i])
        if (!consecutive(order, s)) return false;
    return true;
  };

  // No two edges between the same pair of adjacent levels may cross.
  auto pair_ok = [&](std::size_t i, const Order& lower, const Order& upper) {
    std::map<Id, std::size_t> lo_rank, hi_rank;
    for (std::size_t j = 0; j < lower.size(); ++j) lo_rank[lower[j]] = j;
    for (std::size_t j = 0; j < upper.size(); ++j) hi_rank[upper[j]] = j;
    const auto& es = up_edges[i];
    for (std::size_t a = 0; a < es.size(); ++a)
      for (std::size_t b = a + 1; b < es.size(); ++b) {
        auto la = lo_rank.at(es[a].first), lb = lo_rank.at(es[b].first);
        auto ua = hi_rank.at(es[a].second), ub = hi_rank.at(es[b].second);
        if ((la < lb && ua > ub) || (la > lb && ua < ub)) return false;
      }
    return true;
  };

  std::uint64_t spent = 0;
  std::vector<Order> acc;
  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == levels.size()) return true;
    Order perm(levels[i].begin(), levels[i].end());
    do {
      if (++spent > cap)
        throw std::runtime_error("brute_tlp: search cap exceeded");
      if (!level_ok(i, perm)) continue;
      if (i > 0 && !pair_ok(i - 1, acc.back(), perm)) continue;
      acc.push_back(perm);
      if (dfs(i + 1)) return true;
      acc.pop_back();
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  };

  BruteLevelResult r;
  r.yes = dfs(0);
  if (r.yes) r.witness = LevelWitness{acc};
  return r;
}

BruteSeqResult brute_seqpq(const SeqPQInstance& instance, std::uint64_t cap) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument("brute_seqpq: invalid instance: " +
                                report.summary());
  auto ground = instance.ground();
  require_factorial_within(ground.size(), cap, "brute_seqpq");
  Order perm(ground.begin(), ground.end());
  BruteSeqResult r;
  do {
    bool ok = true;
    for (const auto& t : instance.trees) {
      Order restricted;
      for (const auto& x : perm)
        if (t.leaves().count(x)) restricted.push_back(x);
      if (!t.represents(restricted)) {
        ok = false;
        break;
      }
    }
    if (ok) r.witnesses.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  r.yes = !r.witnesses.empty();
  return r;
}

}  // namespace hvseg
