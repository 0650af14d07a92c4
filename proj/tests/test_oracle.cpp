#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "billiards/error.hpp"
#include "billiards/oracle.hpp"
#include "billiards/shapes.hpp"

using namespace billiards;

namespace {

constexpr double kPi = std::numbers::pi;

// Eigenvalues of -1/2 times the 5-point Dirichlet Laplacian on [0,a]x[0,b]
// with N = a/h, M = b/h cells.
std::vector<double> discrete_rectangle(int N, int M, double h, int count) {
  std::vector<double> out;
  for (int m = 1; m < N; ++m)
    for (int n = 1; n < M; ++n) {
      double sx = std::sin(m * kPi / (2.0 * N)), sy = std::sin(n * kPi / (2.0 * M));
      out.push_back(2 * (sx * sx + sy * sy) / (h * h));
    }
  std::sort(out.begin(), out.end());
  out.resize(count);
  return out;
}

int brute_l_count(int cells) {
  // L-shape with x1 = y1 = 1, x2 = y2 = 2 sampled at h = 1 / cells.
  int count = 0;
  for (int i = 1; i < 2 * cells; ++i)
    for (int j = 1; j < 2 * cells; ++j) {
      bool lower = j < cells;
      bool left = i < cells;
      if ((lower && i < 2 * cells) || (left && j < 2 * cells)) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("rasterize") {
  GridDomain sq = rasterize(shapes::unit_square(), 0.25 / 2);
  CHECK(sq.size() == 49);
  CHECK_THROWS_AS(rasterize(shapes::unit_square(), 0.25), Error);
  CHECK(rasterize(shapes::unit_square(), 0.25, {}, 4).size() == 9);
  try {
    rasterize(shapes::unit_square(), 0.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooCoarse);
  }
  Polygon l = shapes::broken_rectangle(1, 2, 1, 2);
  for (int cells : {8, 16}) CHECK(rasterize(l, 1.0 / cells).size() == brute_l_count(cells));
  // Mixed tags follow the nearest side.
  GridDomain mixed = rasterize(shapes::unit_square(), 0.125,
                               {BoundaryCondition::Dirichlet, BoundaryCondition::Neumann, BoundaryCondition::Dirichlet,
                                BoundaryCondition::Neumann});
  int neumann = 0;
  for (auto& links : mixed.links)
    for (int v : links) neumann += v == GridDomain::kNeumann;
  CHECK(neumann == 2 * 7);
}

TEST_CASE("square Dirichlet spectrum") {
  const int N = 16;
  auto e = fd_eigenvalues(rasterize(shapes::unit_square(), 1.0 / N), 10);
  auto want = discrete_rectangle(N, N, 1.0 / N, 10);
  for (int i = 0; i < 10; ++i) CHECK(e[i] == doctest::Approx(want[i]).epsilon(1e-10));
  auto r = fd_eigenvalues(rasterize(shapes::rectangle(2, 1), 1.0 / 16), 1);
  CHECK(r[0] == doctest::Approx(5 * kPi * kPi / 8).epsilon(5e-3));
}

TEST_CASE("Lanczos path") {
  // 69^2 unknowns exceeds the dense limit; degenerate pairs must appear twice.
  const int N = 70;
  GridDomain dom = rasterize(shapes::unit_square(), 1.0 / N);
  REQUIRE(dom.size() > 4000);
  auto e = fd_eigenvalues(dom, 12);
  auto want = discrete_rectangle(N, N, 1.0 / N, 12);
  for (int i = 0; i < 12; ++i) CHECK(e[i] == doctest::Approx(want[i]).epsilon(1e-9));
}

TEST_CASE("Richardson order on the square") {
  std::vector<double> e;
  for (int N : {8, 16, 32}) e.push_back(fd_eigenvalues(rasterize(shapes::unit_square(), 1.0 / N), 1)[0]);
  RichardsonResult r = richardson(e[0], e[1], e[2]);
  CHECK(r.order >= 1.8);
  CHECK(r.extrapolated == doctest::Approx(kPi * kPi).epsilon(1e-4));
}

TEST_CASE("Neumann square") {
  std::vector<BoundaryCondition> bc(4, BoundaryCondition::Neumann);
  auto e = fd_eigenvalues(rasterize(shapes::unit_square(), 1.0 / 32, bc), 3);
  CHECK(std::fabs(e[0]) < 1e-9);
  CHECK(e[1] == doctest::Approx(kPi * kPi / 2).epsilon(0.08));
  CHECK(e[2] == doctest::Approx(e[1]).epsilon(1e-9));
}

TEST_CASE("L-shape contains the product levels") {
  auto e = fd_eigenvalues(rasterize(shapes::broken_rectangle(1, 2, 1, 2), 1.0 / 24), 30);
  std::vector<double> sc;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 3; ++n) {
      double E = kPi * kPi * (m * m + n * n) / 2;
      if (E <= 60) sc.push_back(E);
    }
  std::sort(sc.begin(), sc.end());
  MatchReport rep = compare_spectra(sc, e, 0.02);
  CHECK(rep.pass);
  CHECK(rep.unmatched > 0);
}

TEST_CASE("compare_spectra") {
  std::vector<double> a{1, 2, 3, 5}, b{1.01, 2.5, 2.98, 4, 5.1};
  MatchReport same = compare_spectra(a, a, 1e-12);
  CHECK(same.pass);
  CHECK(same.max_error == 0);
  MatchReport ab = compare_spectra(a, b, 0.05), ba = compare_spectra(b, a, 0.05);
  for (const auto& m : ab.levels) {
    REQUIRE(m.numerical_index);
    const auto& back = ba.levels[*m.numerical_index];
    REQUIRE(back.numerical_index);
    CHECK(*back.numerical_index == m.index);
  }
  CHECK_FALSE(ab.pass);
  CHECK(ab.unmatched == 1);
  CHECK_FALSE(compare_spectra({1, 2, 3}, {1, 2}, 0.5).pass);
}

TEST_CASE("deform_domain") {
  BrokenRectangle base{2, 3, 1, 2};
  auto [same, id] = deform_domain(base, 3);
  CHECK(id.epsilon == 0);
  CHECK(id.apply({2.5, 0.5}) == Vec2(2.5, 0.5));
  auto [shape, map] = deform_domain(base, Rational(29, 10));
  CHECK(map.epsilon == doctest::Approx(0.1));
  CHECK(map.apply({3, 0.3}).real() == doctest::Approx(2.9));
  CHECK(map.apply({1, 0.3}) == Vec2(1, 0.3));
  CHECK(map.apply({2.5, 1.5}) == Vec2(2.5, 1.5));
  CHECK(shape.x2 == Rational(29, 10));
  DeformationBounds b = check_deformation_bounds(map, base);
  CHECK(b.ok);
  CHECK(b.sup_g == doctest::Approx(0.1));
  // Finite-difference slope agrees with the analytic derivative.
  const double d = 1e-6;
  CHECK((map.g({2.6 + d, 0.5}) - map.g({2.6 - d, 0.5})) / (2 * d) == doctest::Approx(map.dg({2.6, 0.5}).real()));
  CHECK_THROWS_AS(deform_domain(base, 2), Error);
  CHECK_THROWS_AS(deform_domain(base, Rational(31, 10)), Error);
  // Wide lower arm: epsilon is the absolute shift.
  BrokenRectangle wide{1, 3, 1, 2};
  CHECK(deform_domain(wide, Rational(5, 2)).second.epsilon == doctest::Approx(0.5));
  CHECK(x3_for_epsilon(wide, Rational(1, 2)) == Rational(5, 2));
  CHECK(x3_for_epsilon(base, Rational(1, 10)) == Rational(29, 10));
}

TEST_CASE("perturbation study at coarse resolution") {
  BrokenRectangle base{2, 3, 1, 2};
  PerturbationStudy s = perturbation_study(base, {Rational(1, 2), Rational(1, 10), Rational(1, 20), 0}, 6, 1.0 / 20);
  REQUIRE(s.rows.size() == 4);
  CHECK(s.rows.back().eta == 0);
  CHECK(s.rows.front().eta > s.rows[1].eta);
  CHECK(s.strictly_decreasing);
  for (auto& r : s.rows) CHECK(r.bounds.ok);
  CHECK(study_csv(s).rfind("epsilon,eta\n", 0) == 0);
  CHECK_THROWS_AS(perturbation_study(base, {Rational(1, 20), Rational(1, 10)}, 3, 1.0 / 20), Error);
}
