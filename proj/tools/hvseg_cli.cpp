#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "hvseg/core.hpp"
#include "hvseg/gen.hpp"
#include "hvseg/json_io.hpp"
#include "hvseg/oracle.hpp"
#include "hvseg/realize.hpp"
#include "hvseg/reduce.hpp"
#include "hvseg/solve.hpp"

namespace fs = std::filesystem;
using namespace hvseg;

namespace {

constexpr int EXIT_YES = 0;
constexpr int EXIT_NO = 1;
constexpr int EXIT_ERR = 2;

struct GlobalOpts {
  bool json = false;
  bool quiet = false;
  int jobs = 1;
  std::string problem;  // override auto-detection
};

std::mutex out_mutex;

void say(const GlobalOpts& g, const std::string& line) {
  if (g.quiet) return;
  std::lock_guard<std::mutex> lock(out_mutex);
  std::cout << line << "\n";
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

// Write-then-rename so readers never see a partial file.
void atomic_write(const std::string& path, const std::string& text) {
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, target);
}

void write_json(const std::string& path, const json& j) {
  atomic_write(path, j.dump(2) + "\n");
}

std::string detect(const json& j, const GlobalOpts& g) {
  if (!g.problem.empty()) return g.problem;
  return problem_of(j);
}

std::string show(const Order& o) {
  std::string s = "(";
  for (std::size_t i = 0; i < o.size(); ++i)
    s += (i ? "," : "") + o[i];
  return s + ")";
}

// Per-file worker; returns the per-file exit code.
using FileFn = std::function<int(const std::string&)>;

int run_batch(const std::string& path, const GlobalOpts& g, const FileFn& fn) {
  if (!fs::is_directory(path)) return fn(path);
  std::vector<std::string> files;
  for (const auto& e : fs::directory_iterator(path))
    if (e.is_regular_file() && e.path().extension() == ".json")
      files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  std::vector<int> codes(files.size(), EXIT_ERR);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        codes[i] = fn(files[i]);
      } catch (const std::exception& e) {
        say(g, files[i] + ": error: " + e.what());
        codes[i] = EXIT_ERR;
      }
    }
  };
  int n = std::max(1, g.jobs);
  std::vector<std::thread> pool;
  for (int t = 0; t < n - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  int rc = EXIT_YES;
  for (int c : codes) rc = std::max(rc, c);
  return rc;
}

int cmd_solve(const std::string& path, const GlobalOpts& g,
              const std::string& witness_out, std::uint64_t budget) {
  json j = read_json(path);
  std::string p = detect(j, g);
  SolverConfig cfg;
  cfg.budget = budget;
  std::optional<Witness> w;
  if (p == "sfhvseg") {
    auto r = solve_sfhvseg(seg_from_json(j), cfg);
    if (r) w = *r;
  } else if (p == "tlp") {
    auto r = solve_tlp(level_from_json(j), cfg);
    if (r) w = *r;
  } else if (p == "seqpq") {
    auto r = solve_seqpq(seqpq_from_json(j), cfg);
    if (r) w = *r;
  } else {
    throw std::runtime_error("solve: unsupported problem type " + p);
  }
  if (g.json) {
    json out{{"file", path}, {"problem", p}, {"answer", w ? "yes" : "no"}};
    if (w) out["witness"] = to_json(*w);
    say(g, out.dump());
  } else {
    say(g, path + ": " + (w ? "yes" : "no"));
  }
  if (w && !witness_out.empty()) write_json(witness_out, to_json(*w));
  return w ? EXIT_YES : EXIT_NO;
}

int cmd_reduce(const std::string& path, const GlobalOpts& g,
               const std::string& to, const std::string& out_path) {
  json j = read_json(path);
  std::string p = detect(j, g);

  json out;
  std::string stats;
  auto level_stats = [](const LevelInstance& t) {
    std::size_t ncons = 0;
    for (const auto& f : t.constraints) ncons += f.size();
    std::ostringstream os;
    os << t.level.size() << " vertices, " << t.edges.size() << " edges, "
       << ncons << " constraints over " << t.num_levels << " levels";
    return os.str();
  };

  // Normalize the source to a LevelInstance where the route goes through one.
  std::optional<LevelInstance> tlp;
  if (p == "tlp") tlp = level_from_json(j);
  if (p == "sfhvseg" && to != "tlp")
    tlp = hvseg_to_tlp(seg_from_json(j)).target;
  if (p == "seqpq" && (to == "hvseg" || to == "matching" || to == "split"))
    tlp = seqpq_to_tlp(seqpq_from_json(j)).target;

  if (to == "tlp") {
    LevelInstance t = p == "sfhvseg" ? hvseg_to_tlp(seg_from_json(j)).target
                      : p == "seqpq" ? seqpq_to_tlp(seqpq_from_json(j)).target
                                     : throw std::runtime_error(
                                           "reduce: unsupported pair " + p +
                                           " -> tlp");
    out = to_json(t);
    stats = level_stats(t);
  } else if (to == "matching" || to == "split") {
    if (!tlp) throw std::runtime_error("reduce: unsupported pair");
    LevelInstance t = tlp_to_matching(*tlp).target;
    if (to == "split") t = tlp_split_levels(t).target;
    out = to_json(t);
    stats = level_stats(t);
  } else if (to == "hvseg") {
    if (!tlp) throw std::runtime_error("reduce: unsupported pair");
    SegInstance t = tlp_to_hvseg(*tlp).target;
    out = to_json(t);
    std::ostringstream os;
    os << t.horizontals.size() << " horizontals, " << t.verticals.size()
       << " verticals, " << t.edges.size() << " edges";
    stats = os.str();
  } else if (to == "seqpq") {
    SeqPQInstance t;
    if (p == "seqpq")
      t = seqpq_from_json(j);
    else if (tlp)
      t = tlp_to_seqpq(*tlp).target;
    else
      throw std::runtime_error("reduce: unsupported pair");
    out = to_json(t);
    std::ostringstream os;
    os << t.trees.size() << " trees, " << t.ground().size()
       << " ground elements";
    stats = os.str();
  } else if (to == "simpq") {
    SeqPQInstance s;
    if (p == "seqpq")
      s = seqpq_from_json(j);
    else if (tlp)
      s = tlp_to_seqpq(*tlp).target;
    else
      throw std::runtime_error("reduce: unsupported pair");
    SimPQInstance t = seqpq_to_simpq(s);
    out = to_json(t);
    std::ostringstream os;
    os << t.trees.size() << " trees, " << t.arcs.size() << " arcs";
    stats = os.str();
  } else {
    throw std::runtime_error("reduce: unknown target " + to);
  }

  if (!out_path.empty()) write_json(out_path, out);
  if (g.json)
    say(g, json{{"file", path}, {"to", to}, {"stats", stats}}.dump());
  else
    say(g, path + " -> " + to + ": " + stats);
  if (out_path.empty() && !g.quiet) {
    std::lock_guard<std::mutex> lock(out_mutex);
    std::cout << out.dump(2) << "\n";
  }
  return EXIT_YES;
}

int cmd_check(const std::string& path, const GlobalOpts& g,
              const std::string& witness_path) {
  json j = read_json(path);
  std::string p = detect(j, g);
  Witness w = witness_from_json(read_json(witness_path));
  CheckResult r;
  if (p == "sfhvseg")
    r = check_witness(seg_from_json(j), w);
  else if (p == "tlp")
    r = check_witness(level_from_json(j), w);
  else if (p == "seqpq")
    r = check_witness(seqpq_from_json(j), w);
  else
    throw std::runtime_error("check: unsupported problem type " + p);
  if (g.json)
    say(g, json{{"file", path},
                {"accepted", r.ok},
                {"detail", r.detail}}
               .dump());
  else
    say(g, path + ": " + (r.ok ? "accepted" : "rejected: " + r.detail));
  return r.ok ? EXIT_YES : EXIT_NO;
}

int cmd_oracle(const std::string& path, const GlobalOpts& g, bool all,
               std::uint64_t cap) {
  json j = read_json(path);
  std::string p = detect(j, g);
  bool yes = false;
  std::vector<Order> witnesses;
  if (p == "sfhvseg") {
    auto r = brute_sfhvseg(seg_from_json(j), cap);
    yes = r.yes;
    witnesses = r.witnesses;
  } else if (p == "tlp") {
    auto r = brute_tlp(level_from_json(j), cap);
    yes = r.yes;
  } else if (p == "seqpq") {
    auto r = brute_seqpq(seqpq_from_json(j), cap);
    yes = r.yes;
    witnesses = r.witnesses;
  } else {
    throw std::runtime_error("oracle: unsupported problem type " + p);
  }
  if (g.json) {
    json out{{"file", path}, {"answer", yes ? "yes" : "no"}};
    if (all) out["witnesses"] = witnesses;
    say(g, out.dump());
  } else {
    say(g, path + ": " + (yes ? "yes" : "no"));
    if (all)
      for (const auto& w : witnesses) say(g, "  " + show(w));
  }
  return yes ? EXIT_YES : EXIT_NO;
}

int cmd_render(const std::string& path, const GlobalOpts& g,
               const std::string& witness_path, const std::string& out_path,
               int scale) {
  json j = read_json(path);
  std::string p = detect(j, g);
  Witness w = witness_from_json(read_json(witness_path));
  SvgStyle style{scale};
  std::string svg;
  if (p == "sfhvseg") {
    auto arr = realize_segments(seg_from_json(j),
                                std::get<SegWitness>(w).sigma_v);
    svg = emit_svg(arr, style);
    if (!arr.matches_edges())
      say(g, path + ": intersections differ from edges (" +
                 std::to_string(arr.unwanted.size()) + " unwanted, " +
                 std::to_string(arr.missing.size()) + " missing)");
  } else if (p == "tlp") {
    auto drawing = layout_level_drawing(level_from_json(j),
                                        std::get<LevelWitness>(w));
    svg = emit_svg(drawing, style);
    if (drawing.crossings != 0)
      say(g, path + ": " + std::to_string(drawing.crossings) + " crossings");
  } else {
    throw std::runtime_error("render: unsupported problem type " + p);
  }
  if (out_path.empty()) {
    std::lock_guard<std::mutex> lock(out_mutex);
    std::cout << svg;
  } else {
    atomic_write(out_path, svg);
    say(g, path + " -> " + out_path);
  }
  return EXIT_YES;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HV-segment recognition toolkit"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_flag("--json", g.json, "machine-readable output");
  app.add_flag("--quiet", g.quiet, "suppress stdout");
  app.add_option("--jobs", g.jobs, "parallel workers for directory input")
      ->default_val(1);
  app.add_option("--problem", g.problem,
                 "override problem auto-detection (sfhvseg|tlp|seqpq)");

  std::string path, out_path, witness_path, to;
  std::uint64_t budget = 0, cap = 1000000;
  bool all = false;
  int scale = 40;
  int n_h = 10, n_v = 10, n = 10, k = 4, flips = 0;
  double density = 0.3;
  std::uint64_t seed = 0;
  std::string gen_type = "arrangement";

  auto* solve = app.add_subcommand("solve", "decide an instance");
  solve->add_option("path", path)->required();
  solve->add_option("--witness", witness_path, "write the witness here");
  solve->add_option("--budget", budget, "search-node budget (0 = unlimited)");

  auto* reduce = app.add_subcommand("reduce", "translate between problems");
  reduce->add_option("path", path)->required();
  reduce->add_option("--to", to)
      ->required()
      ->check(CLI::IsMember({"tlp", "matching", "split", "hvseg", "seqpq",
                             "simpq"}));
  reduce->add_option("-o,--output", out_path);

  auto* check = app.add_subcommand("check", "verify a witness");
  check->add_option("path", path)->required();
  check->add_option("--witness", witness_path)->required();

  auto* oracle = app.add_subcommand("oracle", "brute-force ground truth");
  oracle->add_option("path", path)->required();
  oracle->add_flag("--all", all, "print every witness");
  oracle->add_option("--cap", cap, "search cap");

  auto* render = app.add_subcommand("render", "emit an SVG drawing");
  render->add_option("path", path)->required();
  render->add_option("--witness", witness_path)->required();
  render->add_option("-o,--output", out_path);
  render->add_option("--scale", scale, "pixels per grid unit")
      ->default_val(40);

  auto* gen = app.add_subcommand("gen", "generate an instance");
  gen->add_option("--type", gen_type)
      ->check(CLI::IsMember({"arrangement", "planted"}))
      ->default_val("arrangement");
  gen->add_option("--nh", n_h)->default_val(10);
  gen->add_option("--nv", n_v)->default_val(10);
  gen->add_option("--density", density)->default_val(0.3);
  gen->add_option("--n", n)->default_val(10);
  gen->add_option("--k", k)->default_val(4);
  gen->add_option("--seed", seed)->default_val(0);
  gen->add_option("--flips", flips, "toggle this many random adjacencies");
  gen->add_option("-o,--output", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return EXIT_ERR;
  }

  try {
    if (solve->parsed())
      return run_batch(path, g, [&](const std::string& f) {
        return cmd_solve(f, g, witness_path, budget);
      });
    if (reduce->parsed())
      return run_batch(path, g, [&](const std::string& f) {
        return cmd_reduce(f, g, to, out_path);
      });
    if (check->parsed())
      return run_batch(path, g, [&](const std::string& f) {
        return cmd_check(f, g, witness_path);
      });
    if (oracle->parsed())
      return run_batch(path, g, [&](const std::string& f) {
        return cmd_oracle(f, g, all, cap);
      });
    if (render->parsed())
      return run_batch(path, g, [&](const std::string& f) {
        return cmd_render(f, g, witness_path, out_path, scale);
      });
    if (gen->parsed()) {
      json out;
      if (gen_type == "arrangement") {
        auto inst = gen_arrangement(n_h, n_v, density, seed);
        if (flips > 0) inst = mutate(inst, flips, seed + 1);
        out = to_json(inst);
      } else {
        out = to_json(gen_planted_seqpq(n, k, seed));
      }
      if (out_path.empty())
        std::cout << out.dump(2) << "\n";
      else
        write_json(out_path, out);
      return EXIT_YES;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_ERR;
  }
  return EXIT_ERR;
}
