#include <doctest.h>

#include <cmath>
#include <numbers>

#include "billiards/error.hpp"
#include "billiards/polygon.hpp"
#include "billiards/polygon_io.hpp"
#include "billiards/shapes.hpp"

using namespace billiards;

namespace {

std::vector<RationalAngle> angles(std::initializer_list<std::pair<int, int>> list) {
  std::vector<RationalAngle> out;
  for (auto [p, q] : list) out.push_back(make_angle(p, q));
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidInput;
}

bool near(Vec2 a, Vec2 b, double tol = 1e-12) { return std::abs(a - b) < tol; }

}  // namespace

TEST_CASE("unit square") {
  Polygon sq = shapes::unit_square();
  CHECK(sq.n_lcm() == 2);
  CHECK(sq.directions() == std::vector<int>{0, 1, 2, 3});
  CHECK(near(sq.points()[2], {1, 1}));
  CHECK(sq.area() == doctest::Approx(1.0));
  CHECK(near(sq.outward_normal(0), {0, -1}));
}

TEST_CASE("broken rectangle vertices") {
  Polygon br = shapes::broken_rectangle(1, 2, 1, 2);
  std::vector<Vec2> expect{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  REQUIRE(br.points().size() == 6);
  for (int k = 0; k < 6; ++k) CHECK(near(br.points()[k], expect[k]));
  CHECK(br.area() == doctest::Approx(3.0));
}

TEST_CASE("closure and angle checks") {
  CHECK(code_of([] { validate_polygon(angles({{1, 2}, {1, 2}, {1, 2}, {1, 2}}), {1, 1, 1, 2}); }) ==
        ErrorCode::ClosureViolation);
  CHECK(code_of([] { validate_polygon(angles({{1, 2}, {1, 2}, {1, 2}, {1, 3}}), {1, 1, 1, 1}); }) ==
        ErrorCode::AngleSumMismatch);
  CHECK(code_of([] { validate_polygon(angles({{1, 2}, {1, 2}, {1, 2}, {1, 2}}), {1, 0, 1, 0}); }) ==
        ErrorCode::NonpositiveLength);
  CHECK(code_of([] {
          validate_polygon(angles({{1, 2}, {1, 2}, {1, 2}, {3, 2}, {3, 2}, {1, 2}, {1, 2}, {1, 2}}),
                           {4, 3, 1, 4, 2, 4, 1, 3});
        }) == ErrorCode::SelfIntersection);
  CHECK(code_of([] { make_angle(2, 1); }) == ErrorCode::InvalidInput);
}

TEST_CASE("solve_closure") {
  auto rect = solve_closure(angles({{1, 2}, {1, 2}, {1, 2}, {1, 2}}), {Rational(2), Rational(1), {}, {}});
  CHECK(rect[2].as_rational() == Rational(2));
  CHECK(rect[3].as_rational() == Rational(1));

  auto par = solve_closure(angles({{2, 3}, {1, 3}, {2, 3}, {1, 3}}), {Rational(2, 3), Rational(1), {}, {}});
  CHECK(par[2].as_rational() == Rational(2, 3));
  CHECK(par[3].as_rational() == Rational(1));

  // x: l0 - l2 - l4 = 0, y: l1 + l3 - l5 = 0
  auto br = solve_closure(angles({{1, 2}, {1, 2}, {3, 2}, {1, 2}, {1, 2}, {1, 2}}),
                          {Rational(5, 2), Rational(1), {}, {}, Rational(3, 2), Rational(7, 3)});
  CHECK(br[2].as_rational() == Rational(1));
  CHECK(br[3].as_rational() == Rational(4, 3));

  CHECK(code_of([] { solve_closure(angles({{1, 2}, {1, 2}, {1, 2}, {1, 2}}), {{}, Rational(1), {}, Rational(1)}); }) ==
        ErrorCode::SingularSystem);
  CHECK(code_of([] {
          solve_closure(angles({{1, 2}, {1, 2}, {3, 2}, {1, 2}, {1, 2}, {1, 2}}),
                        {Rational(1), Rational(1), {}, {}, Rational(2), Rational(2)});
        }) == ErrorCode::NonpositiveLength);
}

TEST_CASE("irrational solved lengths") {
  Polygon tri = shapes::pi5_triangle();
  const double golden = (1 + std::sqrt(5.0)) / 2;
  CHECK(tri.lengths()[1].value() == doctest::Approx(golden).epsilon(1e-14));
  CHECK(tri.lengths()[2].value() == doctest::Approx(golden).epsilon(1e-14));
  CHECK_FALSE(tri.lengths()[1].as_rational().has_value());

  Polygon rt = shapes::rationalized_right_triangle();
  CHECK(rt.n_lcm() == 1000);
  const double b = 0.353 * std::numbers::pi;
  CHECK(rt.lengths()[1].value() == doctest::Approx(1 / std::cos(b)).epsilon(1e-12));
  CHECK(rt.lengths()[2].value() == doctest::Approx(std::tan(b)).epsilon(1e-12));
  CHECK(near(rt.points()[2], {0, std::tan(b)}, 1e-12));
}

TEST_CASE("polygon file parsing") {
  auto spec = parse_polygon_spec(R"({"name":"sq","sides":[{"angle":"2/4","length":"1"},{"angle":"1/2","length":"1"},
    {"angle":"1/2","length":"?"},{"angle":"1/2"}]})");
  CHECK(spec.name == "sq");
  REQUIRE(spec.warnings.size() == 1);
  Polygon p = build_polygon(spec);
  CHECK(p.lengths()[3].as_rational() == Rational(1));
  CHECK(p.warnings().size() == 1);

  auto arr = parse_polygon_spec(
      R"([{"angle":"1/3","length":"0.5"},{"angle":"1/3","length":"1/2"},{"angle":"1/3","length":"0.5"}])");
  CHECK(build_polygon(arr).size() == 3);

  CHECK(code_of([] { parse_polygon_spec("{not json"); }) == ErrorCode::InvalidInput);
  CHECK(code_of([] {
          build_polygon(parse_polygon_spec(R"([{"angle":"1/2","length":"1"},{"angle":"1/2","length":"1"},
            {"angle":"1/2","length":"1"},{"angle":"1/2","length":"2"}])"));
        }) == ErrorCode::ClosureViolation);

  Polygon br = shapes::broken_rectangle(1, 2, 1, 2);
  Polygon again = build_polygon(parse_polygon_spec(polygon_to_json(br)));
  CHECK(again.points() == br.points());
}
