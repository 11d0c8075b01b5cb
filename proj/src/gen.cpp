#include "hvseg/gen.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hvseg {

std::uint64_t SplitMix64::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t bound) {
  assert(bound > 0);
  return next() % bound;
}

double SplitMix64::unit() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

namespace {

// First n entries of a seeded shuffle of 0..m-1.
std::vector<int> sample_distinct(SplitMix64& rng, int m, int n) {
  std::vector<int> pool(static_cast<std::size_t>(m));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < n; ++i) {
    int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - i)));
    std::swap(pool[static_cast<std::size_t>(i)],
              pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(n));
  return pool;
}

}  // namespace

SegInstance gen_arrangement(int n_h, int n_v, double density,
                            std::uint64_t seed) {
  if (n_h < 1 || n_v < 1 || density < 0.0 || density > 1.0)
    throw std::invalid_argument("gen_arrangement: bad parameters");
  SplitMix64 rng(seed);
  // Segment positions live on odd coordinates, extent endpoints on even
  // ones, so "strictly inside" never degenerates into endpoint contact.
  int pool = n_h + n_v;
  int span = std::max(1, static_cast<int>(std::llround(density * pool)));
  auto ys = sample_distinct(rng, pool, n_h);  // horizontal y = 2*ys[i]+1
  auto xs = sample_distinct(rng, pool, n_v);  // vertical   x = 2*xs[j]+1
  std::vector<std::pair<int, int>> hx(static_cast<std::size_t>(n_h));
  std::vector<std::pair<int, int>> vy(static_cast<std::size_t>(n_v));
  auto extent = [&] {
    int lo = static_cast<int>(rng.below(static_cast<std::uint64_t>(
        pool + 1 - span)));
    return std::pair<int, int>{2 * lo, 2 * (lo + span)};
  };
  for (auto& e : hx) e = extent();
  for (auto& e : vy) e = extent();

  SegInstance inst;
  for (int i = 0; i < n_h; ++i)
    inst.horizontals.push_back("h" + std::to_string(i + 1));
  for (int j = 0; j < n_v; ++j)
    inst.verticals.push_back("v" + std::to_string(j + 1));
  for (int i = 0; i < n_h; ++i)
    for (int j = 0; j < n_v; ++j) {
      int x = 2 * xs[static_cast<std::size_t>(j)] + 1;
      int y = 2 * ys[static_cast<std::size_t>(i)] + 1;
      const auto& he = hx[static_cast<std::size_t>(i)];
      const auto& ve = vy[static_cast<std::size_t>(j)];
      if (he.first < x && x < he.second && ve.first < y && y < ve.second)
        inst.edges.emplace(inst.horizontals[static_cast<std::size_t>(i)],
                           inst.verticals[static_cast<std::size_t>(j)]);
    }
  std::vector<int> h_idx(static_cast<std::size_t>(n_h));
  std::iota(h_idx.begin(), h_idx.end(), 0);
  std::sort(h_idx.begin(), h_idx.end(), [&](int a, int b) {
    return ys[static_cast<std::size_t>(a)] < ys[static_cast<std::size_t>(b)];
  });
  for (int i : h_idx)
    inst.sigma_h.push_back(inst.horizontals[static_cast<std::size_t>(i)]);
  return inst;
}

SeqPQInstance gen_planted_seqpq(int n, int k, std::uint64_t seed) {
  if (n < 1 || k < 1)
    throw std::invalid_argument("gen_planted_seqpq: bad parameters");
  SplitMix64 rng(seed);

  Order hidden;
  for (int i = 0; i < n; ++i) hidden.push_back("e" + std::to_string(i + 1));
  for (int i = n - 1; i > 0; --i) {
    int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(hidden[static_cast<std::size_t>(i)],
              hidden[static_cast<std::size_t>(j)]);
  }

  // Contiguous lifespan [lo, hi] over trees 1..k per element.
  std::vector<std::pair<int, int>> span(static_cast<std::size_t>(n));
  for (auto& [lo, hi] : span) {
    lo = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    hi = lo + static_cast<int>(
                  rng.below(static_cast<std::uint64_t>(k - lo + 1)));
  }
  // Widen the nearest lifespan over any tree nobody reaches, so every tree
  // has leaves.
  for (int t = 1; t <= k; ++t) {
    int best = -1, best_d = k + 1;
    for (int i = 0; i < n; ++i) {
      const auto& [lo, hi] = span[static_cast<std::size_t>(i)];
      int d = t < lo ? lo - t : (t > hi ? t - hi : 0);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    auto& [lo, hi] = span[static_cast<std::size_t>(best)];
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }

  SeqPQInstance inst;
  for (int t = 1; t <= k; ++t) {
    // Leaves of tree t, in hidden order.
    Order sorted_local;
    for (int i = 0; i < n; ++i) {
      const auto& [lo, hi] = span[static_cast<std::size_t>(i)];
      if (lo <= t && t <= hi)
        sorted_local.push_back(hidden[static_cast<std::size_t>(i)]);
    }
    IdSet ground(sorted_local.begin(), sorted_local.end());
    std::vector<IdSet> cons;
    int m = static_cast<int>(sorted_local.size());
    if (m >= 2) {
      int how_many = static_cast<int>(rng.below(static_cast<std::uint64_t>(
          m)));
      for (int c = 0; c < how_many; ++c) {
        int len = 2 + static_cast<int>(
                          rng.below(static_cast<std::uint64_t>(m - 1)));
        int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(
            m - len + 1)));
        IdSet s(sorted_local.begin() + a, sorted_local.begin() + a + len);
        cons.push_back(std::move(s));
      }
    }
    inst.trees.push_back(PQTree::from_constraints(ground, cons));
  }
  return inst;
}

SegInstance mutate(const SegInstance& instance, int flips,
                   std::uint64_t seed) {
  if (flips < 1) throw std::invalid_argument("mutate: flips must be >= 1");
  SplitMix64 rng(seed);
  SegInstance out = instance;
  for (int f = 0; f < flips; ++f) {
    const auto& h = instance.horizontals[static_cast<std::size_t>(rng.below(
        instance.horizontals.size()))];
    const auto& v = instance.verticals[static_cast<std::size_t>(rng.below(
        instance.verticals.size()))];
    auto e = std::make_pair(h, v);
    if (!out.edges.erase(e)) out.edges.insert(e);
  }
  return out;
}

}  // namespace hvseg
