#pragma once

#include "json.hpp"
#include "thickflow/geometry.hpp"

namespace thickflow {

// {"kind": "constant" | "sine" | "bump" | "table", ...}
Curve curve_from_json(const nlohmann::json& spec);

// {"profile": {...}, "lower": {...} (optional, mirrors the profile), "l1": x, "l2": y}
OutletDomain domain_from_json(const nlohmann::json& spec);

}  // namespace thickflow
