#pragma once

#include <string>

#include "json.hpp"
#include "nhskin/model.hpp"

namespace nhskin {

/// Parse the JSON model schema
///   {"dimension": int, "bands": int,
///    "terms": [{"offset": [int...], "amplitude": [[{"re": x, "im": y}, ...], ...]}],
///    "name": string (optional)}
/// Throws InvalidArgument naming the first violation and its term index.
LatticeModel model_from_json(const nlohmann::json& doc);

LatticeModel load_model_file(const std::string& path);

nlohmann::json model_to_json(const LatticeModel& model);

}  // namespace nhskin
