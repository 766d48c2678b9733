#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "greenroute/model.hpp"

namespace greenroute {

using json = nlohmann::json;

// Parses the canonical instance document:
//   { "nodes": [..], "edges": [{"id","u","v"}..],
//     "demands": [{"src","dst","amount"}..], "rates": [{"speed","cost"}..] }
// Throws Error(invalid_instance) carrying every violation found.
Instance instance_from_json(const json& doc);

// Reads only the "rates" table; used by commands that need no graph.
StepCost step_cost_from_json(const json& doc);

json to_json(const Instance& inst);

json read_json_file(const std::string& path);  // "-" reads stdin

}  // namespace greenroute
