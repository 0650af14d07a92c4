#include "billiards/polygon_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "billiards/error.hpp"

namespace billiards {

namespace {

std::string scalar_text(const nlohmann::json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorCode::InvalidInput, std::string(what) + " must be a string such as \"1/2\" or an integer");
}

RationalAngle parse_angle(const std::string& text, std::vector<std::string>& warnings) {
  Rational r;
  std::int64_t p, q;
  if (auto slash = text.find('/'); slash != std::string::npos) {
    p = to_int64(parse_rational(text.substr(0, slash)).get_num());
    q = to_int64(parse_rational(text.substr(slash + 1)).get_num());
  } else {
    r = parse_rational(text);
    p = to_int64(r.get_num());
    q = to_int64(r.get_den());
  }
  bool reduced = false;
  RationalAngle a = make_angle(p, q, &reduced);
  if (reduced) warnings.push_back("NonCoprimeAngle: " + text + " reduced to " + a.to_string());
  return a;
}

}  // namespace

PolygonSpec parse_polygon_spec(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed polygon file: ") + e.what());
  }
  PolygonSpec spec;
  const nlohmann::json* sides = &doc;
  if (doc.is_object()) {
    if (doc.contains("name") && doc["name"].is_string()) spec.name = doc["name"].get<std::string>();
    if (!doc.contains("sides")) throw Error(ErrorCode::InvalidInput, "polygon file has no \"sides\" list");
    sides = &doc["sides"];
  }
  if (!sides->is_array()) throw Error(ErrorCode::InvalidInput, "\"sides\" must be a list");
  for (const auto& rec : *sides) {
    if (!rec.is_object() || !rec.contains("angle"))
      throw Error(ErrorCode::InvalidInput, "side record needs an \"angle\"");
    spec.angles.push_back(parse_angle(scalar_text(rec["angle"], "angle"), spec.warnings));
    if (!rec.contains("length") || rec["length"].is_null()) {
      spec.lengths.emplace_back();
      continue;
    }
    std::string len = scalar_text(rec["length"], "length");
    if (len == "?")
      spec.lengths.emplace_back();
    else
      spec.lengths.emplace_back(parse_rational(len));
  }
  return spec;
}

PolygonSpec read_polygon_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_polygon_spec(ss.str());
}

Polygon build_polygon(const PolygonSpec& spec) {
  Polygon poly = make_polygon(spec.angles, spec.lengths, spec.name);
  for (auto& w : spec.warnings) poly.add_warning(w);
  return poly;
}

Polygon load_polygon(const std::string& path) { return build_polygon(read_polygon_spec(path)); }

std::string polygon_to_json(const Polygon& poly) {
  nlohmann::json doc;
  if (!poly.name().empty()) doc["name"] = poly.name();
  doc["sides"] = nlohmann::json::array();
  for (int k = 0; k < poly.size(); ++k) {
    auto r = poly.lengths()[k].as_rational();
    doc["sides"].push_back({{"angle", poly.angles()[k].to_string()}, {"length", r ? r->get_str() : std::string("?")}});
  }
  return doc.dump(2);
}

}  // namespace billiards
