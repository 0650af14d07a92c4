#pragma once

#include <optional>
#include <string>
#include <vector>

#include "billiards/polygon.hpp"

namespace billiards {

struct PolygonSpec {
  std::string name;
  std::vector<RationalAngle> angles;
  std::vector<std::optional<Rational>> lengths;
  std::vector<std::string> warnings;
};

PolygonSpec parse_polygon_spec(const std::string& json_text);
PolygonSpec read_polygon_spec(const std::string& path);

Polygon build_polygon(const PolygonSpec& spec);
Polygon load_polygon(const std::string& path);

std::string polygon_to_json(const Polygon& poly);

}  // namespace billiards
