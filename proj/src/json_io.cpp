#include "hvseg/json_io.hpp"

#include <stdexcept>

namespace hvseg {

namespace {

json node_to_json(const PQTree::NodePtr& n) {
  json j;
  if (n->kind == PQTree::Kind::Leaf) {
    j["type"] = "leaf";
    j["leaf"] = n->leaf;
    return j;
  }
  j["type"] = n->kind == PQTree::Kind::P ? "P" : "Q";
  j["children"] = json::array();
  for (const auto& c : n->children) j["children"].push_back(node_to_json(c));
  return j;
}

PQTree tree_node_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "leaf") return PQTree::leaf(j.at("leaf").get<Id>());
  std::vector<PQTree> children;
  for (const auto& c : j.at("children"))
    children.push_back(tree_node_from_json(c));
  if (type == "P") return PQTree::p_node(children);
  if (type == "Q") return PQTree::q_node(children);
  throw std::invalid_argument("unknown PQ-tree node type: " + type);
}

json edges_to_json(const std::set<std::pair<Id, Id>>& edges) {
  json a = json::array();
  for (const auto& [x, y] : edges) a.push_back(json::array({x, y}));
  return a;
}

std::set<std::pair<Id, Id>> edges_from_json(const json& j) {
  std::set<std::pair<Id, Id>> e;
  for (const auto& pair : j)
    e.emplace(pair.at(0).get<Id>(), pair.at(1).get<Id>());
  return e;
}

}  // namespace

json to_json(const PQTree& tree) {
  if (tree.is_null()) return json(nullptr);
  return node_to_json(tree.root());
}

PQTree tree_from_json(const json& j) {
  if (j.is_null()) return PQTree::null_tree();
  return tree_node_from_json(j);
}

json to_json(const SegInstance& instance) {
  json j;
  j["problem"] = "sfhvseg";
  j["horizontals"] = instance.horizontals;
  j["verticals"] = instance.verticals;
  j["edges"] = edges_to_json(instance.edges);
  j["sigma_h"] = instance.sigma_h;
  if (instance.sigma_v) j["sigma_v"] = *instance.sigma_v;
  return j;
}

SegInstance seg_from_json(const json& j) {
  SegInstance inst;
  inst.horizontals = j.at("horizontals").get<std::vector<Id>>();
  inst.verticals = j.at("verticals").get<std::vector<Id>>();
  inst.edges = edges_from_json(j.at("edges"));
  inst.sigma_h = j.at("sigma_h").get<Order>();
  if (j.contains("sigma_v") && !j.at("sigma_v").is_null())
    inst.sigma_v = j.at("sigma_v").get<Order>();
  return inst;
}

json to_json(const LevelInstance& instance) {
  json j;
  j["problem"] = "tlp";
  j["num_levels"] = instance.num_levels;
  j["levels"] = json::array();
  for (const auto& [v, lvl] : instance.level)
    j["levels"].push_back({{"vertex", v}, {"level", lvl}});
  j["level_edges"] = edges_to_json(instance.edges);
  j["constraints"] = json::array();
  for (const auto& family : instance.constraints) {
    json f = json::array();
    for (const auto& s : family) f.push_back(std::vector<Id>(s.begin(), s.end()));
    j["constraints"].push_back(f);
  }
  return j;
}

LevelInstance level_from_json(const json& j) {
  LevelInstance inst;
  inst.num_levels = j.at("num_levels").get<int>();
  for (const auto& e : j.at("levels"))
    inst.level[e.at("vertex").get<Id>()] = e.at("level").get<int>();
  inst.edges = edges_from_json(j.at("level_edges"));
  for (const auto& family : j.at("constraints")) {
    std::vector<IdSet> f;
    for (const auto& s : family) {
      auto ids = s.get<std::vector<Id>>();
      f.emplace_back(ids.begin(), ids.end());
    }
    inst.constraints.push_back(std::move(f));
  }
  return inst;
}

json to_json(const SeqPQInstance& instance) {
  json j;
  j["problem"] = "seqpq";
  auto g = instance.ground();
  j["ground"] = std::vector<Id>(g.begin(), g.end());
  j["trees"] = json::array();
  for (const auto& t : instance.trees) j["trees"].push_back(to_json(t));
  return j;
}

SeqPQInstance seqpq_from_json(const json& j) {
  SeqPQInstance inst;
  for (const auto& t : j.at("trees")) inst.trees.push_back(tree_from_json(t));
  return inst;
}

json to_json(const SimPQInstance& instance) {
  json j;
  j["problem"] = "simpq";
  j["trees"] = json::array();
  for (const auto& t : instance.trees) j["trees"].push_back(to_json(t));
  j["arcs"] = json::array();
  for (const auto& a : instance.arcs) {
    json m = json::object();
    for (const auto& [from, to] : a.map) m[from] = to;
    j["arcs"].push_back(
        {{"source", a.source}, {"target", a.target}, {"map", m}});
  }
  return j;
}

SimPQInstance simpq_from_json(const json& j) {
  SimPQInstance inst;
  for (const auto& t : j.at("trees")) inst.trees.push_back(tree_from_json(t));
  for (const auto& a : j.at("arcs")) {
    SimPQArc arc;
    arc.source = a.at("source").get<std::size_t>();
    arc.target = a.at("target").get<std::size_t>();
    for (const auto& [from, to] : a.at("map").items())
      arc.map[from] = to.get<Id>();
    inst.arcs.push_back(std::move(arc));
  }
  return inst;
}

json to_json(const SegWitness& w) {
  return {{"witness", "seg"}, {"sigma_v", w.sigma_v}};
}

json to_json(const LevelWitness& w) {
  return {{"witness", "level"}, {"orders", w.orders}};
}

json to_json(const OrderWitness& w) {
  return {{"witness", "order"},
          {"per_tree", w.per_tree},
          {"global", w.global}};
}

json to_json(const Witness& w) {
  return std::visit([](const auto& x) { return to_json(x); }, w);
}

Witness witness_from_json(const json& j) {
  std::string kind = j.at("witness").get<std::string>();
  if (kind == "seg") return SegWitness{j.at("sigma_v").get<Order>()};
  if (kind == "level")
    return LevelWitness{j.at("orders").get<std::vector<Order>>()};
  if (kind == "order")
    return OrderWitness{j.at("per_tree").get<std::vector<Order>>(),
                        j.at("global").get<Order>()};
  throw std::invalid_argument("unknown witness kind: " + kind);
}

std::string problem_of(const json& j) {
  if (j.contains("problem")) {
    auto p = j.at("problem").get<std::string>();
    if (p == "sfhvseg" || p == "tlp" || p == "seqpq" || p == "simpq")
      return p;
    throw std::invalid_argument("unknown problem tag: " + p);
  }
  if (j.contains("arcs")) return "simpq";
  if (j.contains("trees")) return "seqpq";
  if (j.contains("levels")) return "tlp";
  if (j.contains("horizontals")) return "sfhvseg";
  throw std::invalid_argument("cannot determine problem type");
}

}  // namespace hvseg
