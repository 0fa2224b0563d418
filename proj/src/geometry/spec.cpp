#include <set>

#include "thickflow/geometry_json.hpp"

namespace thickflow {

namespace {

using nlohmann::json;

void allow_only(const json& obj, const std::set<std::string>& keys, const std::string& where) {
  if (!obj.is_object()) throw InvalidProfile(where + " must be an object");
  for (const auto& item : obj.items())
    if (!keys.count(item.key())) throw InvalidProfile(where + ": unknown key '" + item.key() + "'");
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw InvalidProfile(where + ": missing '" + key + "'");
  if (!obj.at(key).is_number()) throw InvalidProfile(where + ": '" + key + "' must be a number");
  return obj.at(key).get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

std::vector<double> numbers(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key) || !obj.at(key).is_array()) throw InvalidProfile(where + ": '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : obj.at(key)) {
    if (!v.is_number()) throw InvalidProfile(where + ": '" + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Curve parse_curve(const json& spec, const std::string& where) {
  if (!spec.is_object() || !spec.contains("kind") || !spec.at("kind").is_string())
    throw InvalidProfile(where + ": missing 'kind'");
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "constant") {
    allow_only(spec, {"kind", "value"}, where);
    return Curve::constant(number(spec, "value", where));
  }
  if (kind == "sine") {
    allow_only(spec, {"kind", "mean", "amplitude", "frequency", "phase"}, where);
    return Curve::sine(number(spec, "mean", where), number(spec, "amplitude", where),
                       number_or(spec, "frequency", 1.0, where), number_or(spec, "phase", 0.0, where));
  }
  if (kind == "bump") {
    allow_only(spec, {"kind", "base", "height", "width", "center"}, where);
    return Curve::bump(number(spec, "base", where), number(spec, "height", where), number(spec, "width", where),
                       number_or(spec, "center", 0.0, where));
  }
  if (kind == "table") {
    allow_only(spec, {"kind", "x", "y"}, where);
    return Curve::table(numbers(spec, "x", where), numbers(spec, "y", where));
  }
  throw InvalidProfile(where + ": unknown kind '" + kind + "'");
}

}  // namespace

Curve curve_from_json(const json& spec) { return parse_curve(spec, "profile"); }

OutletDomain domain_from_json(const json& spec) {
  allow_only(spec, {"profile", "lower", "l1", "l2"}, "domain");
  if (!spec.contains("profile")) throw InvalidProfile("domain: missing 'profile'");
  Curve upper = parse_curve(spec.at("profile"), "profile");
  Curve lower = spec.contains("lower") ? parse_curve(spec.at("lower"), "lower") : upper.negated();
  if (!spec.contains("l1") || !spec.at("l1").is_number()) throw InvalidBounds("domain: 'l1' must be a number");
  if (!spec.contains("l2") || !spec.at("l2").is_number()) throw InvalidBounds("domain: 'l2' must be a number");
  return OutletDomain::build(std::move(upper), std::move(lower), spec.at("l1").get<double>(),
                             spec.at("l2").get<double>());
}

}  // namespace thickflow
