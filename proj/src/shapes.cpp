#include "billiards/shapes.hpp"

namespace billiards::shapes {

namespace {

std::vector<RationalAngle> angles(std::initializer_list<std::pair<int, int>> list) {
  std::vector<RationalAngle> out;
  for (auto [p, q] : list) out.push_back(make_angle(p, q));
  return out;
}

}  // namespace

Polygon unit_square() { return rectangle(1, 1); }

Polygon rectangle(const Rational& width, const Rational& height) {
  return validate_polygon(angles({{1, 2}, {1, 2}, {1, 2}, {1, 2}}), {width, height, width, height}, "rectangle");
}

Polygon equilateral_triangle() {
  return validate_polygon(angles({{1, 3}, {1, 3}, {1, 3}}), {1, 1, 1}, "equilateral triangle");
}

Polygon pi3_parallelogram(const Rational& a) {
  return validate_polygon(angles({{2, 3}, {1, 3}, {2, 3}, {1, 3}}), {a, 1, a, 1}, "pi/3 parallelogram");
}

Polygon broken_rectangle(const Rational& x1, const Rational& x2, const Rational& y1, const Rational& y2) {
  return validate_polygon(angles({{1, 2}, {1, 2}, {3, 2}, {1, 2}, {1, 2}, {1, 2}}), {x2, y1, x2 - x1, y2 - y1, x1, y2},
                          "broken rectangle");
}

Polygon broken_parallelogram() {
  Rational h(1, 2);
  return validate_polygon(angles({{2, 3}, {1, 3}, {2, 3}, {1, 3}, {5, 3}, {1, 3}}), {Rational(3, 2), 1, 2, h, h, h},
                          "broken parallelogram");
}

Polygon pi5_triangle() {
  return make_polygon(angles({{2, 5}, {1, 5}, {2, 5}}), {Rational(1), std::nullopt, std::nullopt}, "pi/5 triangle");
}

Polygon rationalized_right_triangle() {
  return make_polygon(angles({{353, 1000}, {147, 1000}, {1, 2}}), {Rational(1), std::nullopt, std::nullopt},
                      "rationalized right triangle");
}

}  // namespace billiards::shapes
