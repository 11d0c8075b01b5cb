#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hvseg/core.hpp"

namespace hvseg {

/// Axis-aligned arrangement on the half-integer grid. All coordinates are
/// stored doubled (1 grid unit = 2), so every comparison is exact integer
/// arithmetic: ranks sit on even values, segment ends on odd ones.
struct SegmentArrangement {
  struct HSeg {
    Id id;
    long long y = 0, x_lo = 0, x_hi = 0;
  };
  struct VSeg {
    Id id;
    long long x = 0, y_lo = 0, y_hi = 0;
  };
  std::vector<HSeg> horizontals;
  std::vector<VSeg> verticals;
  std::set<std::pair<Id, Id>> intersections;  // (h, v), proper crossings
  std::set<std::pair<Id, Id>> unwanted;       // intersections not in E
  std::set<std::pair<Id, Id>> missing;        // E without a crossing

  bool matches_edges() const { return unwanted.empty() && missing.empty(); }
};

/// Horizontal h sits at y = rank(h) in sigma_h and spans half a unit past its
/// extremal neighbors' column ranks; verticals symmetrically. Degree-0
/// segments become half-unit stubs in a margin band past all used ranks.
/// Mismatches against E are reported in the result, never thrown.
SegmentArrangement realize_segments(const SegInstance& instance,
                                    const Order& sigma_v);

/// Straight-line drawing: vertex at (position in its level order, level).
struct LevelDrawing {
  std::map<Id, std::pair<long long, long long>> pos;  // id -> (x, y)
  std::set<std::pair<Id, Id>> edges;                  // (lower, upper)
  long long crossings = 0;
};

/// Layout without any witness check; crossings counted as-is.
LevelDrawing layout_level_drawing(const LevelInstance& instance,
                                  const LevelWitness& witness);

/// Requires an accepted witness (throws std::invalid_argument otherwise);
/// the returned drawing always has zero crossings.
LevelDrawing realize_level_drawing(const LevelInstance& instance,
                                   const LevelWitness& witness);

struct SvgStyle {
  int scale = 40;  // pixels per grid unit
};

/// Deterministic self-contained SVG. Segments are <line> elements with
/// <text> labels; unwanted crossings get class="unwanted" circle markers and
/// missing ones class="missing".
std::string emit_svg(const SegmentArrangement& arrangement,
                     const SvgStyle& style = {});
std::string emit_svg(const LevelDrawing& drawing, const SvgStyle& style = {});

}  // namespace hvseg
