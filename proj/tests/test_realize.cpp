#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hvseg/realize.hpp"
#include "hvseg/reduce.hpp"
#include "hvseg/solve.hpp"
#include "support.hpp"

using namespace hvseg;
using namespace testsupport;

TEST_CASE("single crossing") {
  auto arr = realize_segments(fix_1(), {"v1"});
  CHECK(arr.intersections == std::set<std::pair<Id, Id>>{{"h1", "v1"}});
  CHECK(arr.matches_edges());
  REQUIRE(arr.horizontals.size() == 1);
  CHECK(arr.horizontals[0].y == 2);
  CHECK(arr.horizontals[0].x_lo == 1);
  CHECK(arr.horizontals[0].x_hi == 3);
}

TEST_CASE("cross fixture arrangements") {
  auto good = realize_segments(fix_cross(), {"b", "a", "c"});
  CHECK(good.matches_edges());
  CHECK(good.intersections == fix_cross().edges);

  auto bad = realize_segments(fix_cross(), {"a", "b", "c"});
  CHECK(bad.unwanted == std::set<std::pair<Id, Id>>{{"h2", "b"}});
  CHECK(bad.missing.empty());
}

TEST_CASE("degree-0 stubs stay crossing-free") {
  auto i = fix_cross();
  i.verticals.push_back("z");
  i.horizontals.push_back("h4");
  i.sigma_h.push_back("h4");
  auto arr = realize_segments(i, {"b", "a", "c", "z"});
  CHECK(arr.matches_edges());
}

TEST_CASE("cross predicate equals geometry, sampled") {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 400; ++trial) {
    auto seg = random_seg(rng);
    Order sigma(seg.verticals);
    for (std::size_t i = sigma.size(); i > 1; --i)
      std::swap(sigma[i - 1], sigma[rng.below(i)]);
    seg.sigma_v = sigma;
    bool by_cross = recognize_fixed_both(seg).yes;
    bool by_geometry = realize_segments(seg, sigma).matches_edges();
    CHECK(by_cross == by_geometry);
  }
}

TEST_CASE("level drawing") {
  LevelInstance li;
  li.num_levels = 1;
  li.level = {{"a", 1}, {"b", 1}, {"c", 1}};
  li.constraints = {{}};
  auto d = realize_level_drawing(li, LevelWitness{{{"a", "b", "c"}}});
  CHECK(d.crossings == 0);
  CHECK(d.pos.at("a") == std::pair<long long, long long>{1, 1});
  CHECK(d.pos.at("c") == std::pair<long long, long long>{3, 1});

  auto r = hvseg_to_tlp(fix_cross());
  auto w = solve_tlp(r.target, {});
  REQUIRE(w.has_value());
  CHECK(realize_level_drawing(r.target, *w).crossings == 0);

  LevelInstance two;
  two.num_levels = 2;
  two.level = {{"a", 1}, {"b", 1}, {"c", 2}, {"d", 2}};
  two.edges = {{"a", "c"}, {"b", "d"}};
  two.constraints = {{}, {}};
  LevelWitness inconsistent{{{"a", "b"}, {"d", "c"}}};
  CHECK(layout_level_drawing(two, inconsistent).crossings >= 1);
  CHECK_THROWS_AS(realize_level_drawing(two, inconsistent),
                  std::invalid_argument);
}

TEST_CASE("svg output") {
  auto arr = realize_segments(fix_1(), {"v1"});
  auto svg = emit_svg(arr);
  CHECK(svg == emit_svg(arr));  // byte-identical
  std::size_t lines = 0, at = 0;
  while ((at = svg.find("<line", at)) != std::string::npos) {
    ++lines;
    at += 5;
  }
  CHECK(lines == 2);
  CHECK(svg.find("unwanted") == std::string::npos);

  auto bad = realize_segments(fix_cross(), {"a", "b", "c"});
  auto bad_svg = emit_svg(bad);
  std::size_t marks = 0;
  at = 0;
  while ((at = bad_svg.find("class=\"unwanted\"", at)) != std::string::npos) {
    ++marks;
    at += 1;
  }
  CHECK(marks == 1);

  LevelInstance li;
  li.num_levels = 2;
  li.level = {{"a", 1}, {"b", 2}};
  li.edges = {{"a", "b"}};
  li.constraints = {{}, {}};
  auto d = realize_level_drawing(li, LevelWitness{{{"a"}, {"b"}}});
  auto dsvg = emit_svg(d);
  CHECK(dsvg.find("<circle") != std::string::npos);
  CHECK(dsvg == emit_svg(d));
}
