#pragma once

#include <string>

#include "json.hpp"

#include "hvseg/core.hpp"
#include "hvseg/reduce.hpp"

namespace hvseg {

using nlohmann::json;

json to_json(const PQTree& tree);
PQTree tree_from_json(const json& j);

json to_json(const SegInstance& instance);
json to_json(const LevelInstance& instance);
json to_json(const SeqPQInstance& instance);
json to_json(const SimPQInstance& instance);

SegInstance seg_from_json(const json& j);
LevelInstance level_from_json(const json& j);
SeqPQInstance seqpq_from_json(const json& j);
SimPQInstance simpq_from_json(const json& j);

json to_json(const SegWitness& w);
json to_json(const LevelWitness& w);
json to_json(const OrderWitness& w);
json to_json(const Witness& w);
Witness witness_from_json(const json& j);

/// "sfhvseg" | "tlp" | "seqpq" | "simpq"; reads the "problem" tag, falling
/// back to key shape. Throws std::invalid_argument on unknown documents.
std::string problem_of(const json& j);

}  // namespace hvseg
