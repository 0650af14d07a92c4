#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "billiards/cyclo.hpp"
#include "billiards/geometry.hpp"
#include "billiards/rational.hpp"
#include "billiards/unfold.hpp"

namespace billiards {

// The planar pair D1, D2 as integer combinations of the basis periods.
struct PairChoice {
  std::vector<std::int64_t> first;
  std::vector<std::int64_t> second;

  static PairChoice indices(int i, int j, int count);
  // Index of the basis period equal to `combo`, or -1 for a proper combination.
  static int unit_index(const std::vector<std::int64_t>& combo);
};

Cyclo combine(const std::vector<Period>& basis, const std::vector<std::int64_t>& combo);

// The two real-independent basis periods of smallest norm; ties are broken by
// lexicographic coordinates.
PairChoice default_pair(const std::vector<Period>& basis);

// a = num / den, both purely imaginary elements (2i times a cross product).
struct RelationCoeff {
  Cyclo num;
  Cyclo den;
  std::optional<Rational> exact;
  long double value = 0;
};

// D_k = a_k1 D1 + a_k2 D2 + (integer combination of D1, D2) with 0 <= a_ki < 1.
struct RealRelations {
  Cyclo d1, d2;
  PairChoice pair;
  std::vector<int> periods;
  std::vector<std::array<RelationCoeff, 2>> coeffs;
  // Integer multiples of D1, D2 removed by the reduction.
  std::vector<std::array<std::int64_t, 2>> shifts;

  Vec2 v1() const { return d1.value(); }
  Vec2 v2() const { return d2.value(); }
};

RealRelations real_relations(const std::vector<Period>& basis, const PairChoice& pair);

struct RationalRelations {
  // a_ki = p/q in lowest terms.
  std::vector<std::array<Rational, 2>> a;
  std::int64_t C1 = 1;
  std::int64_t C2 = 1;
  // n_ki = C_i / q_ki.
  std::vector<std::array<std::int64_t, 2>> n;
  // Some coefficients were replaced by rational approximants.
  bool approximated = false;
};

// Exact rationality of every coefficient; nullopt when any is irrational.
std::optional<RationalRelations> detect_drpb(const RealRelations& relations);

// (r1, r2) with D = r1 D1/C1 + r2 D2/C2.
std::pair<std::int64_t, std::int64_t> reduce_period(const Cyclo& D, const RealRelations& relations,
                                                    const RationalRelations& rational);

// Irrational coefficients are replaced by their last continued-fraction
// convergent with denominator <= max_den; rational ones pass unchanged.
RationalRelations rationalize_relations(const RealRelations& relations, std::int64_t max_den);

struct PeriodLattice {
  std::vector<Period> basis;
  RealRelations relations;
  std::optional<RationalRelations> rational;

  Vec2 D1() const { return relations.v1(); }
  Vec2 D2() const { return relations.v2(); }
  std::int64_t C1() const;
  std::int64_t C2() const;
  // D1/C1 and D2/C2.
  std::pair<Vec2, Vec2> generators() const;
};

PeriodLattice make_lattice(const std::vector<Period>& basis, std::optional<PairChoice> pair = std::nullopt);
// Rationalizes the relations of a lattice that is not doubly rational.
PeriodLattice rationalized(PeriodLattice lattice, std::int64_t max_den);

std::string lattice_report(const PeriodLattice& lattice);
std::string lattice_csv(const PeriodLattice& lattice);

}  // namespace billiards
