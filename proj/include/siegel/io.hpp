#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "siegel/hyperell.hpp"
#include "siegel/siegel_point.hpp"

/// JSON forms of the input objects.
namespace siegel::io {

/// {"g": g, "re": [...], "im": [...]} with row-major entries. Nested row
/// lists are accepted on input as well.
nlohmann::json point_to_json(const SiegelPoint& tau);
SiegelPoint point_from_json(const nlohmann::json& j);

/// {"branch": [b_1, ..., b_2g+2]}.
nlohmann::json curve_to_json(const hyperell::HyperellipticCurve& curve);
hyperell::HyperellipticCurve curve_from_json(const nlohmann::json& j);

/// Parses a file; ValidationError on unreadable or malformed input.
nlohmann::json read_json_file(const std::string& path);

}  // namespace siegel::io
