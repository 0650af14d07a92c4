#include <doctest.h>

#include <cmath>
#include <random>

#include "billiards/error.hpp"
#include "billiards/lattice.hpp"
#include "billiards/shapes.hpp"

using namespace billiards;

namespace {

PeriodLattice lattice_of(const Polygon& poly, std::optional<PairChoice> pair = std::nullopt) {
  Epp epp = build_epp(poly);
  return make_lattice(period_basis(epp).periods, pair);
}

Rational brute_closest_kind2(double x, std::int64_t Q) {
  // Minimiser of |q*x - p| over 1 <= q <= Q.
  Rational best;
  double err = INFINITY;
  for (std::int64_t q = 1; q <= Q; ++q) {
    std::int64_t p = std::llround(x * q);
    double e = std::fabs(q * x - p);
    if (e < err - 1e-15) {
      err = e;
      best = Rational(p, q);
    }
  }
  best.canonicalize();
  return best;
}

// Small integer combination of the basis equal to `target`.
std::vector<std::int64_t> find_combo(const std::vector<Period>& basis, Vec2 target) {
  const int count = static_cast<int>(basis.size());
  std::vector<std::int64_t> c(count, -3);
  while (true) {
    Vec2 v = combine(basis, c).value();
    if (std::abs(v - target) < 1e-9) return c;
    int k = 0;
    while (k < count && c[k] == 3) c[k++] = -3;
    if (k == count) break;
    ++c[k];
  }
  FAIL("no combination found");
  return {};
}

RealRelations single_coefficient(double value) {
  RealRelations rel;
  RelationCoeff c;
  c.value = value;
  RelationCoeff zero;
  zero.exact = Rational(0);
  rel.periods = {2};
  rel.coeffs.push_back({c, zero});
  rel.shifts.push_back({0, 0});
  return rel;
}

}  // namespace

TEST_CASE("square lattice") {
  PeriodLattice lat = lattice_of(shapes::unit_square());
  CHECK(lat.relations.coeffs.empty());
  REQUIRE(lat.rational);
  CHECK(lat.C1() == 1);
  CHECK(lat.C2() == 1);
  auto [g1, g2] = lat.generators();
  CHECK(std::abs(g1) == doctest::Approx(2));
  CHECK(std::abs(g2) == doctest::Approx(2));
}

TEST_CASE("integrable polygons have C = 1") {
  for (const Polygon& p :
       {shapes::rectangle(2, 1), shapes::equilateral_triangle(), shapes::rectangle(Rational(3, 7), 5)}) {
    PeriodLattice lat = lattice_of(p);
    REQUIRE(lat.rational);
    CHECK(lat.C1() == 1);
    CHECK(lat.C2() == 1);
  }
}

TEST_CASE("parallelogram relations") {
  for (auto [q, p] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 5}}) {
    PeriodLattice lat = lattice_of(shapes::pi3_parallelogram(Rational(q, p)));
    REQUIRE(lat.basis.size() == 4);
    REQUIRE(lat.rational);
    CHECK(lat.C1() == q);
    CHECK(lat.C2() == q);
    for (auto& c : lat.relations.coeffs)
      for (auto& a : c) {
        REQUIRE(a.exact);
        CHECK(*a.exact >= 0);
        CHECK(*a.exact < 1);
      }
  }
  // a = 2/3: the long periods are 3/2 of the short ones, so every reduced
  // coefficient is 0 or 1/2.
  PeriodLattice lat = lattice_of(shapes::pi3_parallelogram(Rational(2, 3)));
  int halves = 0;
  for (auto& c : lat.relations.coeffs)
    for (auto& a : c) {
      CHECK((*a.exact == 0 || *a.exact == Rational(1, 2)));
      halves += *a.exact == Rational(1, 2);
    }
  CHECK(halves >= 2);
}

TEST_CASE("broken rectangle relations") {
  // x2/x1 = 3/2, y2/y1 = 2 with the pair D_x1 = (2 x1, 0), D_y1 = (0, 2 y1).
  Epp epp = build_epp(shapes::broken_rectangle(2, 3, 1, 2));
  auto basis = period_basis(epp).periods;
  PairChoice pair{find_combo(basis, {4, 0}), find_combo(basis, {0, 2})};
  PeriodLattice lat = make_lattice(basis, pair);
  REQUIRE(lat.rational);
  CHECK(lat.C1() == 2);
  CHECK(lat.C2() == 1);
  // Any pair generates the same lattice of periods.
  auto [g1, g2] = lat.generators();
  auto [h1, h2] = make_lattice(basis).generators();
  CHECK(std::fabs(cross(g1, g2)) == doctest::Approx(std::fabs(cross(h1, h2))));
  CHECK(std::fabs(cross(g1, g2)) == doctest::Approx(4));
}

TEST_CASE("pi/5 triangle is not doubly rational") {
  PeriodLattice lat = lattice_of(shapes::pi5_triangle());
  CHECK(lat.basis.size() == 4);
  CHECK_FALSE(lat.rational);
  CHECK_THROWS_AS(lat.C1(), Error);
  bool irrational = false;
  for (auto& c : lat.relations.coeffs)
    for (auto& a : c) irrational = irrational || !a.exact;
  CHECK(irrational);
  PeriodLattice approx = rationalized(lat, 100);
  REQUIRE(approx.rational);
  CHECK(approx.rational->approximated);
}

TEST_CASE("degenerate pair") {
  Epp epp = build_epp(shapes::unit_square());
  auto basis = period_basis(epp).periods;
  PairChoice p{{1, 0}, {-1, 0}};
  try {
    real_relations(basis, p);
    FAIL("expected DegeneratePair");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegeneratePair);
  }
}

TEST_CASE("reduce_period round trip") {
  for (const Polygon& poly : {shapes::pi3_parallelogram(Rational(2, 3)), shapes::broken_rectangle(2, 3, 1, 2),
                              shapes::broken_parallelogram()}) {
    PeriodLattice lat = lattice_of(poly);
    REQUIRE(lat.rational);
    const auto& rel = lat.relations;
    auto r = reduce_period(rel.d1, rel, *lat.rational);
    CHECK(r == std::pair<std::int64_t, std::int64_t>{lat.C1(), 0});
    r = reduce_period(rel.d1 + rel.d2, rel, *lat.rational);
    CHECK(r == std::pair<std::int64_t, std::int64_t>{lat.C1(), lat.C2()});

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-5, 5);
    auto [g1, g2] = lat.generators();
    for (int t = 0; t < 100; ++t) {
      std::vector<std::int64_t> combo(lat.basis.size());
      for (auto& c : combo) c = coef(rng);
      Cyclo d = combine(lat.basis, combo);
      auto [r1, r2] = reduce_period(d, rel, *lat.rational);
      Vec2 back = static_cast<double>(r1) * g1 + static_cast<double>(r2) * g2;
      CHECK(std::abs(back - d.value()) < 1e-9 * (1 + std::abs(d.value())));
    }
    Cyclo off = Cyclo::monomial(rel.d1.context(), 1, 1);
    CHECK_THROWS_AS(reduce_period(off, rel, *lat.rational), Error);
  }
}

TEST_CASE("rationality does not depend on the pair") {
  for (const Polygon& poly : {shapes::pi3_parallelogram(Rational(3, 5)), shapes::broken_rectangle(2, 3, 1, 2),
                              shapes::pi5_triangle(), shapes::broken_parallelogram()}) {
    Epp epp = build_epp(poly);
    auto basis = period_basis(epp).periods;
    const bool reference = make_lattice(basis).rational.has_value();
    const int count = static_cast<int>(basis.size());
    for (int i = 0; i < count; ++i)
      for (int j = 0; j < count; ++j) {
        if (i == j || cross_2i(basis[i].vector, basis[j].vector).is_zero()) continue;
        CHECK(make_lattice(basis, PairChoice::indices(i, j, count)).rational.has_value() == reference);
      }
    std::vector<int> rev;
    for (int k = poly.size() - 1; k >= 0; --k) rev.push_back(k);
    Epp other = build_epp(poly, rev);
    CHECK(make_lattice(period_basis(other).periods).rational.has_value() == reference);
  }
}

TEST_CASE("rotated parallelogram pair") {
  // D1 - D2 and D1 + D2 of two short periods at 60 degrees.
  Epp epp = build_epp(shapes::pi3_parallelogram(Rational(2, 3)));
  auto basis = period_basis(epp).periods;
  PairChoice base = default_pair(basis);
  PairChoice rotated{std::vector<std::int64_t>(basis.size()), std::vector<std::int64_t>(basis.size())};
  Vec2 u = combine(basis, base.first).value(), v = combine(basis, base.second).value();
  const double sign = dot(u, v) > 0 ? 1 : -1;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    rotated.first[k] = base.first[k] - static_cast<std::int64_t>(sign) * base.second[k];
    rotated.second[k] = base.first[k] + static_cast<std::int64_t>(sign) * base.second[k];
  }
  PeriodLattice lat = make_lattice(basis, rotated);
  REQUIRE(lat.rational);
  CHECK(std::fabs(dot(lat.D1(), lat.D2())) < 1e-12);
  CHECK(lat.C1() == 4);
  CHECK(lat.C2() == 4);
}

TEST_CASE("rationalize_relations") {
  RationalRelations r = rationalize_relations(single_coefficient(std::sqrt(2.0)), 100);
  CHECK(r.a[0][0] == Rational(99, 70));
  CHECK(r.a[0][1] == 0);
  CHECK(r.approximated);
  CHECK(r.a[0][0] == brute_closest_kind2(std::sqrt(2.0), 100));

  const double phi = (1 + std::sqrt(5.0)) / 2;
  r = rationalize_relations(single_coefficient(phi), 50);
  CHECK(r.a[0][0] == Rational(55, 34));
  CHECK(r.C1 == 34);

  RealRelations exact = single_coefficient(1.5);
  exact.coeffs[0][0].exact = Rational(3, 2);
  r = rationalize_relations(exact, 7);
  CHECK(r.a[0][0] == Rational(3, 2));
  CHECK_FALSE(r.approximated);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 300; ++t) {
    double x = u(rng);
    std::int64_t Q = 2 + t % 200;
    Rational a = rationalize_relations(single_coefficient(x), Q).a[0][0];
    double q = a.get_den().get_d();
    CHECK(q <= Q);
    CHECK(std::fabs(x - a.get_d()) <= 1 / (q * Q));
    CHECK(a == brute_closest_kind2(x, Q));
  }
  CHECK_THROWS_AS(rationalize_relations(single_coefficient(0.3), 1), Error);
}
