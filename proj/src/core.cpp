#include "hvseg/core.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hvseg {

namespace {

template <typename... Args>
std::string cat(Args&&... args) {
  std::ostringstream os;
  (os << ... << args);
  return os.str();
}

bool laminar(const IdSet& a, const IdSet& b) {
  std::size_t common = 0;
  for (const auto& x : a) common += b.count(x);
  return common == 0 || common == a.size() || common == b.size();
}

// True iff the members of `set` occupy consecutive positions in `order`.
bool consecutive_in(const IdSet& set, const Order& order) {
  if (set.size() <= 1) return true;
  std::size_t lo = order.size(), hi = 0, seen = 0;
  for (std::size_t j = 0; j < order.size(); ++j) {
    if (set.count(order[j])) {
      lo = std::min(lo, j);
      hi = std::max(hi, j);
      ++seen;
    }
  }
  return seen == set.size() && hi - lo + 1 == set.size();
}

std::map<Id, std::size_t> rank_of(const Order& order) {
  std::map<Id, std::size_t> r;
  for (std::size_t j = 0; j < order.size(); ++j) r[order[j]] = j;
  return r;
}

}  // namespace

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v;
  }
  return out;
}

IdSet SeqPQInstance::ground() const {
  IdSet x;
  for (const auto& t : trees) x.insert(t.leaves().begin(), t.leaves().end());
  return x;
}

bool is_permutation_of(const Order& order, const IdSet& domain) {
  if (order.size() != domain.size()) return false;
  IdSet seen;
  for (const auto& x : order) {
    if (!domain.count(x)) return false;
    if (!seen.insert(x).second) return false;
  }
  return true;
}

ValidationReport validate(const SegInstance& instance) {
  ValidationReport r;
  IdSet hs(instance.horizontals.begin(), instance.horizontals.end());
  IdSet vs(instance.verticals.begin(), instance.verticals.end());
  if (hs.size() != instance.horizontals.size())
    r.violations.push_back("duplicate horizontal ids");
  if (vs.size() != instance.verticals.size())
    r.violations.push_back("duplicate vertical ids");
  for (const auto& h : hs)
    if (vs.count(h))
      r.violations.push_back(cat("id in both H and V: ", h));
  for (const auto& [h, v] : instance.edges) {
    if (!hs.count(h)) r.violations.push_back(cat("edge references unknown horizontal: ", h));
    if (!vs.count(v)) r.violations.push_back(cat("edge references unknown vertical: ", v));
  }
  if (!is_permutation_of(instance.sigma_h, hs))
    r.violations.push_back("sigma_h is not a permutation of H");
  if (instance.sigma_v && !is_permutation_of(*instance.sigma_v, vs))
    r.violations.push_back("sigma_v is not a permutation of V");
  return r;
}

std::vector<IdSet> level_sets(const LevelInstance& instance) {
  std::vector<IdSet> sets(std::max(instance.num_levels, 0));
  for (const auto& [v, lv] : instance.level)
    if (lv >= 1 && lv <= instance.num_levels) sets[lv - 1].insert(v);
  return sets;
}

ValidationReport validate(const LevelInstance& instance) {
  ValidationReport r;
  if (instance.num_levels < 0) r.violations.push_back("negative level count");
  for (const auto& [v, lv] : instance.level)
    if (lv < 1 || lv > instance.num_levels)
      r.violations.push_back(cat("vertex ", v, " on out-of-range level ", lv));
  for (const auto& [u, w] : instance.edges) {
    auto iu = instance.level.find(u);
    auto iw = instance.level.find(w);
    if (iu == instance.level.end() || iw == instance.level.end()) {
      r.violations.push_back(cat("edge references unknown vertex: ", u, "-", w));
      continue;
    }
    if (iw->second != iu->second + 1)
      r.violations.push_back(cat("not proper: edge ", u, "-", w,
                                 " spans levels ", iu->second, " and ",
                                 iw->second));
  }
  if ((int)instance.constraints.size() > instance.num_levels)
    r.violations.push_back("more constraint families than levels");
  auto sets = level_sets(instance);
  for (std::size_t i = 0; i < instance.constraints.size(); ++i) {
    const auto& family = instance.constraints[i];
    for (const auto& c : family)
      for (const auto& x : c)
        if (i >= sets.size() || !sets[i].count(x))
          r.violations.push_back(
              cat("constraint on level ", i + 1, " mentions non-member ", x));
    for (std::size_t a = 0; a < family.size(); ++a)
      for (std::size_t b = a + 1; b < family.size(); ++b)
        if (!laminar(family[a], family[b]))
          r.violations.push_back(cat("family on level ", i + 1, " not laminar"));
  }
  return r;
}

ValidationReport validate(const SeqPQInstance& instance) {
  ValidationReport r;
  for (std::size_t i = 0; i < instance.trees.size(); ++i)
    if (instance.trees[i].is_null())
      r.violations.push_back(cat("tree ", i + 1, " is the null tree"));
  if (!r.ok()) return r;
  for (const auto& x : instance.ground()) {
    int first = -1, last = -1, count = 0;
    for (std::size_t i = 0; i < instance.trees.size(); ++i) {
      if (instance.trees[i].leaves().count(x)) {
        if (first < 0) first = (int)i;
        last = (int)i;
        ++count;
      }
    }
    if (last - first + 1 != count)
      r.violations.push_back(cat("lifespan not consecutive for element ", x));
  }
  return r;
}

LevelStructure level_structure(const SegInstance& instance) {
  auto report = validate(instance);
  if (!report.ok())
    throw std::invalid_argument(cat("invalid instance: ", report.summary()));
  LevelStructure s;
  int k = (int)instance.sigma_h.size();
  for (int i = 0; i < k; ++i) s.level[instance.sigma_h[i]] = i + 1;
  s.active.assign(k, IdSet{});
  s.intersecting.assign(k, IdSet{});
  std::map<Id, std::pair<int, int>> span;
  for (const auto& [h, v] : instance.edges) {
    int lv = s.level.at(h);
    auto it = span.find(v);
    if (it == span.end()) {
      span[v] = {lv, lv};
    } else {
      it->second.first = std::min(it->second.first, lv);
      it->second.second = std::max(it->second.second, lv);
    }
    s.intersecting[lv - 1].insert(v);
  }
  for (const auto& v : instance.verticals)
    if (!span.count(v))
      throw std::invalid_argument(
          cat("degree-0 vertical ", v,
              ": no lifespan; strip it and append it to the witness"));
  s.lifespan = span;
  for (const auto& [v, iv] : span)
    for (int i = iv.first; i <= iv.second; ++i) s.active[i - 1].insert(v);
  return s;
}

std::optional<std::pair<Id, Id>> find_cross(const SegInstance& instance,
                                            const Order& sigma_v) {
  int rows = (int)instance.sigma_h.size();
  int cols = (int)sigma_v.size();
  auto hrank = rank_of(instance.sigma_h);
  auto vrank = rank_of(sigma_v);
  std::vector<std::vector<char>> m(rows, std::vector<char>(cols, 0));
  for (const auto& [h, v] : instance.edges)
    m[hrank.at(h)][vrank.at(v)] = 1;
  // Prefix counts of ones per row and per column.
  std::vector<std::vector<int>> row(rows, std::vector<int>(cols + 1, 0));
  std::vector<std::vector<int>> col(cols, std::vector<int>(rows + 1, 0));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) row[i][j + 1] = row[i][j] + m[i][j];
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) col[j][i + 1] = col[j][i] + m[i][j];
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (m[i][j]) continue;
      bool left = row[i][j] > 0;
      bool right = row[i][cols] - row[i][j + 1] > 0;
      bool below = col[j][i] > 0;
      bool above = col[j][rows] - col[j][i + 1] > 0;
      if (left && right && below && above)
        return std::make_pair(instance.sigma_h[i], sigma_v[j]);
    }
  }
  return std::nullopt;
}

CheckResult check_witness(const SegInstance& instance, const SegWitness& w) {
  auto report = validate(instance);
  if (!report.ok()) return {false, cat("invalid instance: ", report.summary())};
  IdSet vs(instance.verticals.begin(), instance.verticals.end());
  if (!is_permutation_of(w.sigma_v, vs))
    return {false, "witness sigma_v is not a permutation of V"};
  if (auto cross = find_cross(instance, w.sigma_v))
    return {false, cat("cross at (", cross->first, ", ", cross->second, ")")};
  return {true, ""};
}

CheckResult check_witness(const LevelInstance& instance,
                          const LevelWitness& w) {
  auto report = validate(instance);
  if (!report.ok()) return {false, cat("invalid instance: ", report.summary())};
  auto sets = level_sets(instance);
  if (w.orders.size() != sets.size())
    return {false, "wrong number of per-level orders"};
  for (std::size_t i = 0; i < sets.size(); ++i)
    if (!is_permutation_of(w.orders[i], sets[i]))
      return {false, cat("order for level ", i + 1,
                         " is not a permutation of the level")};
  for (std::size_t i = 0; i < instance.constraints.size(); ++i)
    for (const auto& c : instance.constraints[i])
      if (!consecutive_in(c, w.orders[i]))
        return {false, cat("constraint violated on level ", i + 1)};
  // Consistent ordering of disjoint adjacent-level edge pairs.
  std::vector<std::map<Id, std::size_t>> rank;
  rank.reserve(w.orders.size());
  for (const auto& o : w.orders) rank.push_back(rank_of(o));
  std::vector<std::vector<std::pair<Id, Id>>> per_gap(
      std::max(instance.num_levels - 1, 0));
  for (const auto& [u, v] : instance.edges)
    per_gap[instance.level.at(u) - 1].push_back({u, v});
  for (std::size_t i = 0; i < per_gap.size(); ++i) {
    const auto& es = per_gap[i];
    for (std::size_t a = 0; a < es.size(); ++a) {
      for (std::size_t b = a + 1; b < es.size(); ++b) {
        if (es[a].first == es[b].first || es[a].second == es[b].second)
          continue;
        bool lower = rank[i].at(es[a].first) < rank[i].at(es[b].first);
        bool upper = rank[i + 1].at(es[a].second) < rank[i + 1].at(es[b].second);
        if (lower != upper)
          return {false, cat("edges ", es[a].first, "-", es[a].second, " and ",
                             es[b].first, "-", es[b].second,
                             " cross between levels ", i + 1, " and ", i + 2)};
      }
    }
  }
  return {true, ""};
}

CheckResult check_witness(const SeqPQInstance& instance,
                          const OrderWitness& w) {
  auto report = validate(instance);
  if (!report.ok()) return {false, cat("invalid instance: ", report.summary())};
  if (w.per_tree.size() != instance.trees.size())
    return {false, "wrong number of per-tree orders"};
  for (std::size_t i = 0; i < instance.trees.size(); ++i) {
    if (!is_permutation_of(w.per_tree[i], instance.trees[i].leaves()))
      return {false, cat("order for tree ", i + 1,
                         " is not a permutation of its leaf set")};
    if (!instance.trees[i].represents(w.per_tree[i]))
      return {false, cat("order for tree ", i + 1, " is not represented")};
  }
  for (std::size_t i = 0; i + 1 < w.per_tree.size(); ++i) {
    auto ra = rank_of(w.per_tree[i]);
    auto rb = rank_of(w.per_tree[i + 1]);
    Order shared_a, shared_b;
    for (const auto& x : w.per_tree[i])
      if (rb.count(x)) shared_a.push_back(x);
    for (const auto& x : w.per_tree[i + 1])
      if (ra.count(x)) shared_b.push_back(x);
    if (shared_a != shared_b)
      return {false, cat("trees ", i + 1, " and ", i + 2,
                         " disagree on shared elements")};
  }
  if (!is_permutation_of(w.global, instance.ground()))
    return {false, "global order is not a permutation of the ground set"};
  auto rg = rank_of(w.global);
  for (std::size_t i = 0; i < w.per_tree.size(); ++i)
    for (std::size_t j = 1; j < w.per_tree[i].size(); ++j)
      if (rg.at(w.per_tree[i][j - 1]) > rg.at(w.per_tree[i][j]))
        return {false, cat("global order does not extend the order of tree ",
                           i + 1)};
  return {true, ""};
}

CheckResult check_witness(const SegInstance& instance, const Witness& w) {
  if (const auto* s = std::get_if<SegWitness>(&w))
    return check_witness(instance, *s);
  return {false, "witness type does not match a segment instance"};
}

CheckResult check_witness(const LevelInstance& instance, const Witness& w) {
  if (const auto* s = std::get_if<LevelWitness>(&w))
    return check_witness(instance, *s);
  return {false, "witness type does not match a level instance"};
}

CheckResult check_witness(const SeqPQInstance& instance, const Witness& w) {
  if (const auto* s = std::get_if<OrderWitness>(&w))
    return check_witness(instance, *s);
  return {false, "witness type does not match an ordering instance"};
}

}  // namespace hvseg
