#pragma once

#include <string>

#include <json.hpp>

#include "tanglebound/bound.hpp"
#include "tanglebound/qstate.hpp"

namespace tanglebound {

// Wire formats:
//   state       {"amplitudes": [[re, im] x 8]}
//   observable  {"matrix": [[[re, im] x 8] x 8]}  (row-major)
//   problem     {"witnesses": [...], "measured": [...], "measure": "tau3"|"tau3sq",
//                "space": "full"|"symmetric"|{"span": [state, state]},
//                "settings": {...}}
// Settings fields are all optional; absent ones keep their defaults.
// Malformed documents raise std::invalid_argument.

nlohmann::json state_to_json(const PureState& state);
PureState state_from_json(const nlohmann::json& j);

nlohmann::json observable_to_json(const Observable& obs);
Observable observable_from_json(const nlohmann::json& j);

nlohmann::json settings_to_json(const OptimizerSettings& settings);
OptimizerSettings settings_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const BoundProblem& problem);
BoundProblem problem_from_json(const nlohmann::json& j);

nlohmann::json result_to_json(const BoundResult& result, bool include_trace);

std::string status_name(SolveStatus status);

nlohmann::json load_json_file(const std::string& path);

}  // namespace tanglebound
