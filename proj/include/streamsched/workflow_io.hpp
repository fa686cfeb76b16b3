#pragma once

#include <streamsched/workflow.hpp>

#include <json.hpp>

#include <string>
#include <string_view>

namespace streamsched {

// JSON workflow document:
//   {"unit_dp_rate": 1.5,
//    "services": [{"id", "mi", "lambda", "gamma", "movable", "placement_cloud"?, "mu"?}],
//    "edges": [{"org", "dest", "share"}],
//    "metadata": {...}?}
// Unknown fields are rejected. Throws schema_error carrying the field path.
stream_workflow load_workflow(nlohmann::json const & document);
stream_workflow load_workflow(std::string_view text);
stream_workflow load_workflow_file(std::string const & path);

nlohmann::json to_json(stream_workflow const & workflow, nlohmann::json metadata = nullptr);

} // namespace streamsched
