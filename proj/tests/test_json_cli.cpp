#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hvseg/json_io.hpp"
#include "hvseg/reduce.hpp"
#include "support.hpp"

using namespace hvseg;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

std::string binary() {
  const char* p = std::getenv("HVSEG_BIN");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args, std::string* out = nullptr) {
  std::string cmd = binary() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) text.append(buf, got);
  int status = pclose(pipe);
  if (out) *out = text;
  return WEXITSTATUS(status);
}

fs::path scratch() {
  auto d = fs::temp_directory_path() /
           ("hvseg_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("json round trips") {
  auto seg = fix_cross();
  seg.sigma_v = Order{"b", "a", "c"};
  CHECK(seg_from_json(to_json(seg)) == seg);
  CHECK(seg_from_json(json::parse(to_json(seg).dump())) == seg);

  auto li = hvseg_to_tlp(fix_cross()).target;
  CHECK(level_from_json(to_json(li)) == li);

  SeqPQInstance si;
  si.trees = {PQTree::from_constraints(fix_pq_ground(),
                                       fix_pq_constraints()),
              PQTree::universal({"d", "e", "f"})};
  CHECK(seqpq_from_json(to_json(si)) == si);

  auto simpq = seqpq_to_simpq(si);
  CHECK(simpq_from_json(to_json(simpq)) == simpq);

  CHECK(tree_from_json(to_json(PQTree::null_tree())).is_null());

  Witness w1 = SegWitness{{"a", "b"}};
  Witness w2 = LevelWitness{{{"a"}, {"b", "c"}}};
  Witness w3 = OrderWitness{{{"a", "b"}}, {"a", "b"}};
  CHECK(witness_from_json(to_json(w1)) == w1);
  CHECK(witness_from_json(to_json(w2)) == w2);
  CHECK(witness_from_json(to_json(w3)) == w3);
}

TEST_CASE("problem detection") {
  CHECK(problem_of(to_json(fix_cross())) == "sfhvseg");
  CHECK(problem_of(to_json(hvseg_to_tlp(fix_cross()).target)) == "tlp");
  json untagged = to_json(fix_cross());
  untagged.erase("problem");
  CHECK(problem_of(untagged) == "sfhvseg");
  CHECK_THROWS(problem_of(json::object()));
  CHECK_THROWS(problem_of(json{{"problem", "sudoku"}}));
}

TEST_CASE("cli solve, check, oracle, reduce, render") {
  auto dir = scratch();
  auto cross = dir / "cross.json";
  write_file(cross, to_json(fix_cross()).dump());
  auto triangle = dir / "zz_triangle.json";
  write_file(triangle, to_json(fix_triangle()).dump());

  auto wfile = dir / "w.json";
  CHECK(run("solve " + cross.string() + " --witness " + wfile.string()) == 0);
  CHECK(run("solve " + triangle.string()) == 1);

  CHECK(run("check " + cross.string() + " --witness " + wfile.string()) == 0);
  write_file(dir / "bad_w.json",
             to_json(Witness{SegWitness{{"a", "b", "c"}}}).dump());
  CHECK(run("check " + cross.string() + " --witness " +
            (dir / "bad_w.json").string()) == 1);

  std::string out;
  CHECK(run("--json oracle " + cross.string() + " --all", &out) == 0);
  auto j = json::parse(out);
  CHECK(j.at("answer") == "yes");
  CHECK(j.at("witnesses").size() == 4);
  CHECK(run("oracle " + triangle.string()) == 1);

  auto tlp = dir / "tlp.json";
  CHECK(run("reduce " + cross.string() + " --to tlp -o " + tlp.string()) ==
        0);
  CHECK(run("solve " + tlp.string()) == 0);
  CHECK(run("reduce " + tlp.string() + " --to simpq -o " +
            (dir / "simpq.json").string()) == 0);
  CHECK(run("reduce " + cross.string() + " --to nowhere") == 2);

  auto svg = dir / "cross.svg";
  CHECK(run("render " + cross.string() + " --witness " + wfile.string() +
            " -o " + svg.string()) == 0);
  std::ifstream in(svg);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str().find("<svg") == 0);

  write_file(dir / "malformed.json", "{ nope");
  CHECK(run("solve " + (dir / "malformed.json").string()) == 2);

  fs::remove_all(dir);
}

TEST_CASE("cli gen and batch") {
  auto dir = scratch();
  auto batch = dir / "batch";
  fs::create_directories(batch);
  for (int s = 0; s < 6; ++s)
    CHECK(run("gen --type arrangement --nh 6 --nv 6 --density 0.4 --seed " +
              std::to_string(s) + " -o " +
              (batch / ("a" + std::to_string(s) + ".json")).string()) == 0);
  CHECK(run("gen --type planted --n 10 --k 3 --seed 1 -o " +
            (batch / "p.json").string()) == 0);

  std::string seq, par;
  CHECK(run("solve " + batch.string(), &seq) == 0);
  CHECK(run("--jobs 4 solve " + batch.string(), &par) == 0);
  // identical per-file verdicts regardless of parallelism
  auto sorted_lines = [](std::string text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    for (std::string l; std::getline(ss, l);) lines.push_back(l);
    std::sort(lines.begin(), lines.end());
    return lines;
  };
  CHECK(sorted_lines(seq) == sorted_lines(par));

  std::string g1, g2;
  run("gen --type planted --n 8 --k 3 --seed 9", &g1);
  run("gen --type planted --n 8 --k 3 --seed 9", &g2);
  CHECK(g1 == g2);

  fs::remove_all(dir);
}
