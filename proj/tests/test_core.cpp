#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hvseg/core.hpp"
#include "support.hpp"

using namespace hvseg;
using namespace testsupport;

TEST_CASE("seg validation") {
  CHECK(validate(fix_cross()).ok());
  CHECK(validate(fix_1()).ok());

  auto bad = fix_cross();
  bad.sigma_h.pop_back();
  CHECK_FALSE(validate(bad).ok());

  bad = fix_cross();
  bad.edges.emplace("h1", "zz");
  CHECK_FALSE(validate(bad).ok());

  bad = fix_cross();
  bad.verticals.push_back("h1");  // id reused across the two sides
  CHECK_FALSE(validate(bad).ok());
}

TEST_CASE("level structure") {
  auto ls = level_structure(fix_cross());
  CHECK(ls.level.at("h1") == 1);
  CHECK(ls.level.at("h3") == 3);
  CHECK(ls.lifespan.at("b") == std::pair<int, int>{1, 3});
  CHECK(ls.lifespan.at("a") == std::pair<int, int>{2, 2});
  CHECK(ls.active[1] == IdSet{"a", "b", "c"});
  CHECK(ls.intersecting[0] == IdSet{"b"});
  CHECK(ls.intersecting[1] == IdSet{"a", "c"});

  auto dangling = fix_cross();
  dangling.verticals.push_back("free");
  CHECK_THROWS_AS(level_structure(dangling), std::invalid_argument);
}

TEST_CASE("find_cross") {
  auto i = fix_cross();
  auto cross = find_cross(i, {"a", "b", "c"});
  REQUIRE(cross.has_value());
  CHECK(*cross == std::pair<Id, Id>{"h2", "b"});
  CHECK_FALSE(find_cross(i, {"b", "a", "c"}).has_value());
  CHECK_FALSE(find_cross(fix_1(), {"v1"}).has_value());
}

TEST_CASE("seg witness checking") {
  auto i = fix_cross();
  CHECK(check_witness(i, SegWitness{{"b", "a", "c"}}).ok);
  CHECK_FALSE(check_witness(i, SegWitness{{"a", "b", "c"}}).ok);
  CHECK_FALSE(check_witness(i, SegWitness{{"a", "b"}}).ok);
  CHECK_FALSE(check_witness(i, Witness{LevelWitness{}}).ok);
}

TEST_CASE("level witness checking") {
  LevelInstance li;
  li.num_levels = 2;
  li.level = {{"a", 1}, {"b", 1}, {"c", 2}, {"d", 2}};
  li.edges = {{"a", "c"}, {"b", "d"}};
  li.constraints = {{}, {}};
  REQUIRE(validate(li).ok());

  CHECK(check_witness(li, LevelWitness{{{"a", "b"}, {"c", "d"}}}).ok);
  // crossing pair of edges
  CHECK_FALSE(check_witness(li, LevelWitness{{{"a", "b"}, {"d", "c"}}}).ok);
  // missing vertex
  CHECK_FALSE(check_witness(li, LevelWitness{{{"a"}, {"c", "d"}}}).ok);

  li.constraints[0] = {{"a", "b"}};
  CHECK(check_witness(li, LevelWitness{{{"b", "a"}, {"d", "c"}}}).ok);

  LevelInstance bad = li;
  bad.level["x"] = 5;  // gap past num_levels
  CHECK_FALSE(validate(bad).ok());
}

TEST_CASE("order witness checking") {
  SeqPQInstance si;
  si.trees = {PQTree::from_constraints({"a", "b", "c"}, {{"a", "b"}}),
              PQTree::from_constraints({"b", "c", "d"}, {{"c", "d"}})};
  REQUIRE(validate(si).ok());

  OrderWitness good;
  good.per_tree = {{"a", "b", "c"}, {"b", "c", "d"}};
  good.global = {"a", "b", "c", "d"};
  CHECK(check_witness(si, good).ok);

  OrderWitness flipped = good;
  flipped.per_tree[1] = {"c", "b", "d"};  // disagrees on shared {b,c}
  CHECK_FALSE(check_witness(si, flipped).ok);

  OrderWitness unrepresented = good;
  unrepresented.per_tree[0] = {"a", "c", "b"};
  CHECK_FALSE(check_witness(si, unrepresented).ok);

  OrderWitness bad_global = good;
  bad_global.global = {"d", "a", "b", "c"};
  CHECK_FALSE(check_witness(si, bad_global).ok);
}

TEST_CASE("seqpq validation") {
  SeqPQInstance si;
  si.trees = {PQTree::universal({"a", "b"}), PQTree::universal({"c"}),
              PQTree::universal({"a", "c"})};  // "a" lifespan not contiguous
  CHECK_FALSE(validate(si).ok());

  si.trees = {PQTree::universal({"a", "b"}), PQTree::null_tree()};
  CHECK_FALSE(validate(si).ok());

  si.trees = {PQTree::universal({"a", "b"}), PQTree::universal({"b", "c"})};
  CHECK(validate(si).ok());
  CHECK(si.ground() == IdSet{"a", "b", "c"});
}
