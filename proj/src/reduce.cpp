#include "hvseg/reduce.hpp"

#include <algorithm>
#include <stdexcept>

#include "hvseg/solve.hpp"

namespace hvseg {

namespace {

Id mangle(const Id& base, int a) { return base + "#" + std::to_string(a); }
Id mangle(const Id& base, int a, int b) {
  return base + "#" + std::to_string(a) + "#" + std::to_string(b);
}

void require_valid(const ValidationReport& r, const char* what) {
  if (!r.ok())
    throw std::invalid_argument(std::string(what) + ": " + r.summary());
}

// Order of the whole vertex set induced by per-level orders translated to a
// common namespace. Relations come from consecutive pairs of each order.
Order merge_translated(const std::vector<Order>& orders,
                       const std::map<Id, Id>& to_common) {
  std::vector<Order> translated;
  translated.reserve(orders.size());
  for (const auto& o : orders) {
    Order t;
    t.reserve(o.size());
    for (const auto& x : o) t.push_back(to_common.at(x));
    translated.push_back(std::move(t));
  }
  return merge_orders(translated);
}

bool is_matching(const LevelInstance& instance) {
  std::map<Id, int> deg;
  for (const auto& [a, b] : instance.edges) {
    ++deg[a];
    ++deg[b];
  }
  for (const auto& [v, d] : deg)
    if (d > 1) return false;
  return true;
}

std::vector<IdSet> family_at(const LevelInstance& instance, int lvl) {
  if (lvl - 1 < (int)instance.constraints.size())
    return instance.constraints[lvl - 1];
  return {};
}

}  // namespace

SegToLevel hvseg_to_tlp(const SegInstance& instance) {
  LevelStructure ls = level_structure(instance);  // validates, rejects deg-0
  int k = (int)instance.sigma_h.size();

  LevelInstance out;
  out.num_levels = k;
  out.constraints.assign(k, {});
  auto to_orig = std::make_shared<std::map<Id, Id>>();
  for (const auto& [v, span] : ls.lifespan) {
    for (int i = span.first; i <= span.second; ++i) {
      Id id = mangle(v, i);
      out.level[id] = i;
      (*to_orig)[id] = v;
      if (i > span.first) out.edges.insert({mangle(v, i - 1), id});
    }
  }
  for (int i = 1; i <= k; ++i) {
    if (ls.intersecting[i - 1].empty()) continue;
    IdSet c;
    for (const auto& v : ls.intersecting[i - 1]) c.insert(mangle(v, i));
    out.constraints[i - 1].push_back(std::move(c));
  }

  SegToLevel r;
  r.target = std::move(out);
  r.pull_witness = [to_orig](const LevelWitness& w) {
    SegWitness s;
    s.sigma_v = merge_translated(w.orders, *to_orig);
    return s;
  };
  return r;
}

LevelToLevel tlp_to_matching(const LevelInstance& instance) {
  require_valid(validate(instance), "tlp_to_matching");

  // Assign each edge end of an exploded vertex its own copy.
  std::map<Id, std::vector<std::pair<Id, Id>>> incident;  // v -> edges
  for (const auto& e : instance.edges) {
    incident[e.first].push_back(e);
    incident[e.second].push_back(e);
  }
  std::map<Id, std::vector<Id>> copies;                 // v -> copy ids
  std::map<std::pair<Id, std::pair<Id, Id>>, Id> port;  // (v, edge) -> copy
  LevelInstance out;
  out.num_levels = instance.num_levels;
  out.constraints.assign(instance.num_levels, {});
  auto to_orig = std::make_shared<std::map<Id, Id>>();
  for (const auto& [v, lvl] : instance.level) {
    auto it = incident.find(v);
    int d = it == incident.end() ? 0 : (int)it->second.size();
    if (d <= 1) {
      out.level[v] = lvl;
      copies[v] = {v};
      (*to_orig)[v] = v;
      if (d == 1) port[{v, it->second[0]}] = v;
      continue;
    }
    auto edges = it->second;
    std::sort(edges.begin(), edges.end());
    for (int j = 0; j < d; ++j) {
      Id c = mangle(v, lvl, j + 1);
      out.level[c] = lvl;
      copies[v].push_back(c);
      (*to_orig)[c] = v;
      port[{v, edges[j]}] = c;
    }
  }
  for (const auto& e : instance.edges)
    out.edges.insert({port.at({e.first, e}), port.at({e.second, e})});
  for (int i = 1; i <= instance.num_levels; ++i) {
    for (const auto& c : family_at(instance, i)) {
      IdSet rel;
      for (const auto& v : c)
        rel.insert(copies.at(v).begin(), copies.at(v).end());
      out.constraints[i - 1].push_back(std::move(rel));
    }
  }
  for (const auto& [v, cs] : copies)
    if (cs.size() > 1)
      out.constraints[instance.level.at(v) - 1].push_back(
          IdSet(cs.begin(), cs.end()));

  LevelToLevel r;
  r.target = std::move(out);
  r.pull_witness = [to_orig](const LevelWitness& w) {
    LevelWitness s;
    s.orders.reserve(w.orders.size());
    for (const auto& o : w.orders) {
      Order collapsed;
      IdSet seen;
      for (const auto& x : o) {
        const Id& v = to_orig->at(x);
        if (seen.insert(v).second) collapsed.push_back(v);
      }
      s.orders.push_back(std::move(collapsed));
    }
    return s;
  };
  return r;
}

LevelToLevel tlp_split_levels(const LevelInstance& instance) {
  require_valid(validate(instance), "tlp_split_levels");
  if (!is_matching(instance))
    throw std::invalid_argument(
        "tlp_split_levels: input must be a matching (run tlp_to_matching)");

  int k = instance.num_levels;
  std::vector<std::vector<IdSet>> families(k);
  std::vector<int> width(k), base(k + 1, 0);
  for (int i = 1; i <= k; ++i) {
    families[i - 1] = family_at(instance, i);
    std::sort(families[i - 1].begin(), families[i - 1].end(),
              [](const IdSet& a, const IdSet& b) {
                return a.size() != b.size() ? a.size() < b.size() : a < b;
              });
    width[i - 1] = std::max<int>(1, (int)families[i - 1].size());
    base[i] = base[i - 1] + width[i - 1];
  }

  LevelInstance out;
  out.num_levels = base[k];
  out.constraints.assign(base[k], {});
  auto to_orig = std::make_shared<std::map<Id, Id>>();
  auto first_levels = std::make_shared<std::vector<int>>();
  for (int i = 1; i <= k; ++i) first_levels->push_back(base[i - 1] + 1);

  auto sets = level_sets(instance);
  for (int i = 1; i <= k; ++i) {
    for (const auto& v : sets[i - 1]) {
      for (int j = 1; j <= width[i - 1]; ++j) {
        Id c = mangle(v, i, j);
        out.level[c] = base[i - 1] + j;
        (*to_orig)[c] = v;
        if (j > 1) out.edges.insert({mangle(v, i, j - 1), c});
      }
    }
    for (int j = 1; j <= (int)families[i - 1].size(); ++j) {
      IdSet rel;
      for (const auto& v : families[i - 1][j - 1]) rel.insert(mangle(v, i, j));
      out.constraints[base[i - 1] + j - 1].push_back(std::move(rel));
    }
  }
  for (const auto& [u, w] : instance.edges) {
    int iu = instance.level.at(u);
    out.edges.insert(
        {mangle(u, iu, width[iu - 1]), mangle(w, iu + 1, 1)});
  }

  LevelToLevel r;
  r.target = std::move(out);
  r.pull_witness = [to_orig, first_levels](const LevelWitness& w) {
    LevelWitness s;
    for (int lvl : *first_levels) {
      Order o;
      for (const auto& x : w.orders[lvl - 1]) o.push_back(to_orig->at(x));
      s.orders.push_back(std::move(o));
    }
    return s;
  };
  return r;
}

namespace {

// Connected components of a union of level-monotone paths, each reported as
// the list of its vertices from bottom to top.
std::vector<std::vector<Id>> monotone_paths(const LevelInstance& instance) {
  std::map<Id, Id> up, down;
  for (const auto& [u, w] : instance.edges) {
    if (up.count(u) || down.count(w))
      throw std::invalid_argument(
          "tlp_to_hvseg: graph is not a union of level-monotone paths");
    up[u] = w;
    down[w] = u;
  }
  std::vector<std::vector<Id>> paths;
  for (const auto& [v, lvl] : instance.level) {
    if (down.count(v)) continue;  // not a bottom endpoint
    std::vector<Id> p = {v};
    Id cur = v;
    while (up.count(cur)) {
      cur = up.at(cur);
      p.push_back(cur);
    }
    paths.push_back(std::move(p));
  }
  std::sort(paths.begin(), paths.end(),
            [&](const std::vector<Id>& a, const std::vector<Id>& b) {
              int la = instance.level.at(a.front());
              int lb = instance.level.at(b.front());
              return la != lb ? la < lb : a.front() < b.front();
            });
  return paths;
}

LevelToSeg tlp_paths_to_hvseg(const LevelInstance& instance) {
  int k = instance.num_levels;
  for (int i = 1; i <= k; ++i)
    if (family_at(instance, i).size() > 1)
      throw std::invalid_argument(
          "tlp_to_hvseg: more than one constraint on a level");

  auto paths = monotone_paths(instance);
  std::map<Id, std::size_t> path_of;  // vertex -> path index
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (const auto& v : paths[p]) path_of[v] = p;

  // Constrained span of each path, and which levels need guard rows: a
  // present path that is constrained somewhere but not around level i must
  // be pinned there, or a cross-free column order could slip it inside the
  // level's consecutive block.
  std::vector<std::pair<int, int>> span(paths.size(), {0, -1});
  std::vector<IdSet> members(k);  // level -> constrained vertex set
  for (int i = 1; i <= k; ++i) {
    auto fam = family_at(instance, i);
    if (!fam.empty()) members[i - 1] = fam[0];
    for (const auto& v : members[i - 1]) {
      auto& s = span[path_of.at(v)];
      if (s.second < s.first) s = {i, i};
      s.first = std::min(s.first, i);
      s.second = std::max(s.second, i);
    }
  }
  std::vector<char> guarded(k, 0);
  for (std::size_t p = 0; p < paths.size(); ++p) {
    if (span[p].second < span[p].first) continue;  // never constrained
    int lo = instance.level.at(paths[p].front());
    int hi = instance.level.at(paths[p].back());
    for (int i = lo; i <= hi; ++i)
      if (i < span[p].first || i > span[p].second) guarded[i - 1] = 1;
  }

  SegInstance out;
  auto vertical_name = [](std::size_t p) { return "p" + std::to_string(p); };
  for (std::size_t p = 0; p < paths.size(); ++p)
    out.verticals.push_back(vertical_name(p));
  std::vector<std::vector<std::size_t>> present(k);  // level -> path indices
  for (std::size_t p = 0; p < paths.size(); ++p) {
    int lo = instance.level.at(paths[p].front());
    int hi = instance.level.at(paths[p].back());
    for (int i = lo; i <= hi; ++i) present[i - 1].push_back(p);
  }
  for (int i = 1; i <= k; ++i) {
    Id h = "h" + std::to_string(i);
    auto add_guard = [&](const Id& name) {
      out.horizontals.push_back(name);
      out.sigma_h.push_back(name);
      for (std::size_t p : present[i - 1])
        if (span[p].second >= span[p].first)
          out.edges.insert({name, vertical_name(p)});
    };
    if (guarded[i - 1]) add_guard(h + "_below");
    out.horizontals.push_back(h);
    out.sigma_h.push_back(h);
    for (const auto& v : members[i - 1])
      out.edges.insert({h, vertical_name(path_of.at(v))});
    if (guarded[i - 1]) add_guard(h + "_above");
  }

  // Vertex of each path on each level it is present on.
  auto vertex_at = std::make_shared<std::map<std::pair<std::size_t, int>, Id>>();
  for (std::size_t p = 0; p < paths.size(); ++p)
    for (const auto& v : paths[p]) (*vertex_at)[{p, instance.level.at(v)}] = v;

  LevelToSeg r;
  auto spans = std::make_shared<std::vector<std::pair<int, int>>>(span);
  auto pres = std::make_shared<std::vector<std::vector<std::size_t>>>(present);
  r.target = std::move(out);
  r.pull_witness = [spans, pres, vertex_at, k](const SegWitness& w) {
    std::map<Id, std::size_t> rank;
    for (std::size_t j = 0; j < w.sigma_v.size(); ++j) rank[w.sigma_v[j]] = j;
    LevelWitness s;
    s.orders.assign(k, {});
    // Present paths in sigma_v order; the never-constrained ones (degree-0
    // columns) go to the back of every level.
    for (int i = 1; i <= k; ++i) {
      std::vector<std::size_t> ps = (*pres)[i - 1];
      std::stable_sort(ps.begin(), ps.end(),
                       [&](std::size_t a, std::size_t b) {
                         bool fa = (*spans)[a].second < (*spans)[a].first;
                         bool fb = (*spans)[b].second < (*spans)[b].first;
                         if (fa != fb) return fb;
                         return rank.at("p" + std::to_string(a)) <
                                rank.at("p" + std::to_string(b));
                       });
      for (std::size_t p : ps)
        s.orders[i - 1].push_back(vertex_at->at({p, i}));
    }
    return s;
  };
  return r;
}

}  // namespace

LevelToSeg tlp_to_hvseg(const LevelInstance& instance) {
  require_valid(validate(instance), "tlp_to_hvseg");
  bool shaped = true;
  try {
    monotone_paths(instance);
  } catch (const std::invalid_argument&) {
    shaped = false;
  }
  for (int i = 1; i <= instance.num_levels && shaped; ++i)
    if (family_at(instance, i).size() > 1) shaped = false;
  if (shaped) return tlp_paths_to_hvseg(instance);

  auto rm = tlp_to_matching(instance);
  auto rs = tlp_split_levels(rm.target);
  auto rh = tlp_paths_to_hvseg(rs.target);
  LevelToSeg r;
  r.target = std::move(rh.target);
  auto pull_m = rm.pull_witness;
  auto pull_s = rs.pull_witness;
  auto pull_h = rh.pull_witness;
  r.pull_witness = [pull_m, pull_s, pull_h](const SegWitness& w) {
    return pull_m(pull_s(pull_h(w)));
  };
  return r;
}

SeqToLevel seqpq_to_tlp(const SeqPQInstance& instance) {
  require_valid(validate(instance), "seqpq_to_tlp");
  int k = (int)instance.trees.size();

  LevelInstance out;
  out.num_levels = 2 * k;
  out.constraints.assign(2 * k, {});
  auto to_orig = std::make_shared<std::map<Id, Id>>();
  auto relabel = [&](const IdSet& c, int lvl) {
    IdSet rel;
    for (const auto& x : c) rel.insert(mangle(x, lvl));
    return rel;
  };
  for (int i = 0; i < k; ++i) {
    const auto& leaves = instance.trees[i].leaves();
    int lo = 2 * i + 1, hi = 2 * i + 2;
    for (const auto& x : leaves) {
      out.level[mangle(x, lo)] = lo;
      out.level[mangle(x, hi)] = hi;
      (*to_orig)[mangle(x, lo)] = x;
      (*to_orig)[mangle(x, hi)] = x;
      out.edges.insert({mangle(x, lo), mangle(x, hi)});
      if (i + 1 < k && instance.trees[i + 1].leaves().count(x))
        out.edges.insert({mangle(x, hi), mangle(x, hi + 1)});
    }
    auto [c1, c2] = instance.trees[i].split_constraints();
    for (const auto& c : c1)
      out.constraints[lo - 1].push_back(relabel(c, lo));
    for (const auto& c : c2)
      out.constraints[hi - 1].push_back(relabel(c, hi));
  }

  SeqToLevel r;
  r.target = std::move(out);
  r.pull_witness = [to_orig, k](const LevelWitness& w) {
    OrderWitness s;
    for (int i = 0; i < k; ++i) {
      Order o;
      for (const auto& x : w.orders[2 * i]) o.push_back(to_orig->at(x));
      s.per_tree.push_back(std::move(o));
    }
    s.global = merge_orders(s.per_tree);
    return s;
  };
  return r;
}

LevelToSeq tlp_to_seqpq(const LevelInstance& instance) {
  require_valid(validate(instance), "tlp_to_seqpq");
  auto rm = tlp_to_matching(instance);
  const LevelInstance& m = rm.target;

  // One ground element per matching edge; isolated vertices keep their id.
  std::map<Id, Id> elem;
  for (const auto& [u, w] : m.edges) {
    Id e = u + "~" + w;
    elem[u] = e;
    elem[w] = e;
  }
  for (const auto& [v, lvl] : m.level)
    if (!elem.count(v)) elem[v] = v;

  auto sets = level_sets(m);
  SeqPQInstance out;
  auto kept = std::make_shared<std::vector<int>>();  // tree index -> level
  auto vertex_at =
      std::make_shared<std::map<std::pair<Id, int>, Id>>();  // (elem,lvl)->v
  for (int i = 1; i <= m.num_levels; ++i) {
    if (sets[i - 1].empty()) continue;
    IdSet leaves;
    for (const auto& v : sets[i - 1]) {
      leaves.insert(elem.at(v));
      (*vertex_at)[{elem.at(v), i}] = v;
    }
    std::vector<IdSet> rel;
    for (const auto& c : family_at(m, i)) {
      IdSet rc;
      for (const auto& v : c) rc.insert(elem.at(v));
      rel.push_back(std::move(rc));
    }
    out.trees.push_back(PQTree::from_constraints(leaves, rel));
    kept->push_back(i);
  }

  LevelToSeq r;
  r.target = std::move(out);
  int num_levels = m.num_levels;
  auto pull_m = rm.pull_witness;
  r.pull_witness = [kept, vertex_at, num_levels, pull_m](const OrderWitness& w) {
    LevelWitness mw;
    mw.orders.assign(num_levels, {});
    for (std::size_t t = 0; t < kept->size(); ++t) {
      int lvl = (*kept)[t];
      for (const auto& e : w.per_tree[t])
        mw.orders[lvl - 1].push_back(vertex_at->at({e, lvl}));
    }
    return pull_m(mw);
  };
  return r;
}

SimPQInstance seqpq_to_simpq(const SeqPQInstance& instance) {
  require_valid(validate(instance), "seqpq_to_simpq");
  SimPQInstance out;
  out.trees = instance.trees;
  std::size_t k = instance.trees.size();
  for (std::size_t i = 0; i + 1 < k; ++i) {
    IdSet common;
    for (const auto& x : instance.trees[i].leaves())
      if (instance.trees[i + 1].leaves().count(x)) common.insert(x);
    if (common.empty()) continue;
    std::size_t s = out.trees.size();
    out.trees.push_back(PQTree::universal(common));
    std::map<Id, Id> ident;
    for (const auto& x : common) ident[x] = x;
    out.arcs.push_back({s, i, ident});
    out.arcs.push_back({s, i + 1, ident});
  }
  return out;
}

}  // namespace hvseg
