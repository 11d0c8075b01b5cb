#pragma once

#include <functional>
#include <map>

#include "hvseg/core.hpp"

namespace hvseg {

/// Target instance plus the witness back-mapper: a yes-witness for the
/// target pulls back to a yes-witness for the source.
template <typename Target, typename SourceWitness, typename TargetWitness>
struct Reduction {
  Target target;
  std::function<SourceWitness(const TargetWitness&)> pull_witness;
};

using SegToLevel = Reduction<LevelInstance, SegWitness, LevelWitness>;
using LevelToLevel = Reduction<LevelInstance, LevelWitness, LevelWitness>;
using LevelToSeg = Reduction<SegInstance, LevelWitness, SegWitness>;
using SeqToLevel = Reduction<LevelInstance, OrderWitness, LevelWitness>;
using LevelToSeq = Reduction<SeqPQInstance, LevelWitness, OrderWitness>;

/// DAG of PQ-trees with leaf injections along the arcs, emitted for an
/// external 2-fixed Simultaneous PQ-Ordering solver. Arc maps send source
/// leaves to target leaves.
struct SimPQArc {
  std::size_t source = 0;
  std::size_t target = 0;
  std::map<Id, Id> map;

  bool operator==(const SimPQArc&) const = default;
};

struct SimPQInstance {
  std::vector<PQTree> trees;
  std::vector<SimPQArc> arcs;

  bool operator==(const SimPQInstance&) const = default;
};

/// One level per horizontal segment; one level-monotone path per vertical,
/// covering exactly its lifespan; a single consecutivity constraint per
/// level. Rejects degree-0 verticals.
SegToLevel hvseg_to_tlp(const SegInstance& instance);

/// Explode every vertex into degree-1 copies, grouped by one added
/// consecutivity constraint; the output graph is a matching.
LevelToLevel tlp_to_matching(const LevelInstance& instance);

/// Split every level into one level per constraint, synchronized by
/// parallel paths. Requires a matching (run tlp_to_matching first).
LevelToLevel tlp_split_levels(const LevelInstance& instance);

/// Verticals from level-monotone paths, horizontals from levels. Composes
/// tlp_to_matching and tlp_split_levels automatically when the input is not
/// already a union of paths with at most one constraint per level.
LevelToSeg tlp_to_hvseg(const LevelInstance& instance);

/// Two levels per tree, carrying the two laminar halves of its constraint
/// family; same-element vertices on adjacent levels joined by edges.
SeqToLevel seqpq_to_tlp(const SeqPQInstance& instance);

/// Ground set from matching edges (isolated vertices stay as their own
/// elements); per-level PQ-trees with vertices relabeled edge-wise.
/// Composes tlp_to_matching internally.
LevelToSeq tlp_to_seqpq(const LevelInstance& instance);

/// Path-shaped DAG alternating the input trees (sinks) with single-P-node
/// trees over consecutive overlaps (sources); max degree 2.
SimPQInstance seqpq_to_simpq(const SeqPQInstance& instance);

}  // namespace hvseg
