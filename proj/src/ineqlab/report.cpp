#include "thickflow/ineqlab.hpp"

namespace thickflow {

nlohmann::json InequalityReport::to_json() const {
  nlohmann::json j;
  j["id"] = id;
  j["q"] = q;
  j["constant"] = constant;
  j["reference"] = reference;
  j["h"] = h;
  j["dofs"] = dofs;
  j["trials"] = trials;
  j["note"] = note;
  return j;
}

nlohmann::json reports_to_json(const std::vector<InequalityReport>& reports) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : reports) j.push_back(r.to_json());
  return j;
}

}  // namespace thickflow
