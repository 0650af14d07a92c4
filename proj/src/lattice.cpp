#include "billiards/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "billiards/error.hpp"
#include "billiards/rationalize.hpp"

namespace billiards {

namespace {

long double ratio_value(const Cyclo& num, const Cyclo& den) { return (num.eval() / den.eval()).real(); }

std::int64_t floor_of(const RelationCoeff& c) {
  if (c.exact) {
    Integer f;
    mpz_fdiv_q(f.get_mpz_t(), c.exact->get_num_mpz_t(), c.exact->get_den_mpz_t());
    return to_int64(f);
  }
  return static_cast<std::int64_t>(std::floor(c.value));
}

std::string coeff_string(const RelationCoeff& c) {
  if (c.exact) return to_string(*c.exact);
  std::ostringstream os;
  os.precision(15);
  os << static_cast<double>(c.value) << " (irrational)";
  return os.str();
}

}  // namespace

PairChoice PairChoice::indices(int i, int j, int count) {
  if (i < 0 || j < 0 || i >= count || j >= count || i == j)
    throw Error(ErrorCode::InvalidInput, "pair indices out of range");
  PairChoice p{std::vector<std::int64_t>(count, 0), std::vector<std::int64_t>(count, 0)};
  p.first[i] = 1;
  p.second[j] = 1;
  return p;
}

int PairChoice::unit_index(const std::vector<std::int64_t>& combo) {
  int at = -1;
  for (int i = 0; i < static_cast<int>(combo.size()); ++i) {
    if (combo[i] == 0) continue;
    if (combo[i] != 1 || at >= 0) return -1;
    at = i;
  }
  return at;
}

Cyclo combine(const std::vector<Period>& basis, const std::vector<std::int64_t>& combo) {
  if (basis.empty() || combo.size() != basis.size())
    throw Error(ErrorCode::InvalidInput, "combination length does not match the basis");
  Cyclo sum(basis.front().vector.context());
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (combo[i] != 0) sum += basis[i].vector.scaled(combo[i]);
  return sum;
}

PairChoice default_pair(const std::vector<Period>& basis) {
  const int count = static_cast<int>(basis.size());
  auto key = [&](int i) {
    Vec2 v = basis[i].value();
    auto r = [](double x) { return std::round(x * 1e9); };
    return std::make_tuple(r(std::abs(v)), r(v.real()), r(v.imag()));
  };
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key(a) < key(b); });
  for (int a = 0; a < count; ++a)
    for (int b = a + 1; b < count; ++b)
      if (!cross_2i(basis[order[a]].vector, basis[order[b]].vector).is_zero())
        return PairChoice::indices(order[a], order[b], count);
  throw Error(ErrorCode::DegeneratePair, "all periods are collinear");
}

RealRelations real_relations(const std::vector<Period>& basis, const PairChoice& pair) {
  RealRelations rel;
  rel.pair = pair;
  rel.d1 = combine(basis, pair.first);
  rel.d2 = combine(basis, pair.second);
  const Cyclo w = cross_2i(rel.d1, rel.d2);
  if (w.is_zero()) throw Error(ErrorCode::DegeneratePair, "the chosen periods are collinear");
  const int i1 = PairChoice::unit_index(pair.first), i2 = PairChoice::unit_index(pair.second);
  for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
    if (k == i1 || k == i2) continue;
    const Cyclo& d = basis[k].vector;
    std::array<RelationCoeff, 2> c{RelationCoeff{cross_2i(d, rel.d2), w, {}, 0},
                                   RelationCoeff{cross_2i(rel.d1, d), w, {}, 0}};
    std::array<std::int64_t, 2> shift{};
    for (int i = 0; i < 2; ++i) {
      c[i].exact = rational_ratio(c[i].num, w);
      c[i].value = ratio_value(c[i].num, w);
      shift[i] = floor_of(c[i]);
      if (shift[i] != 0) {
        c[i].num -= w.scaled(shift[i]);
        c[i].value -= shift[i];
        if (c[i].exact) *c[i].exact -= shift[i];
      }
    }
    rel.periods.push_back(k);
    rel.coeffs.push_back(std::move(c));
    rel.shifts.push_back(shift);
  }
  return rel;
}

namespace {

RationalRelations from_fractions(std::vector<std::array<Rational, 2>> a, bool approximated) {
  RationalRelations r;
  r.a = std::move(a);
  r.approximated = approximated;
  for (auto& pair : r.a) {
    r.C1 = lcm_checked(r.C1, to_int64(pair[0].get_den()));
    r.C2 = lcm_checked(r.C2, to_int64(pair[1].get_den()));
  }
  for (auto& pair : r.a) r.n.push_back({r.C1 / to_int64(pair[0].get_den()), r.C2 / to_int64(pair[1].get_den())});
  return r;
}

}  // namespace

std::optional<RationalRelations> detect_drpb(const RealRelations& relations) {
  std::vector<std::array<Rational, 2>> a;
  for (auto& c : relations.coeffs) {
    if (!c[0].exact || !c[1].exact) return std::nullopt;
    a.push_back({*c[0].exact, *c[1].exact});
  }
  return from_fractions(std::move(a), false);
}

std::pair<std::int64_t, std::int64_t> reduce_period(const Cyclo& D, const RealRelations& relations,
                                                    const RationalRelations& rational) {
  const Cyclo w = cross_2i(relations.d1, relations.d2);
  auto a1 = rational_ratio(cross_2i(D, relations.d2), w);
  auto a2 = rational_ratio(cross_2i(relations.d1, D), w);
  if (!a1 || !a2) throw Error(ErrorCode::NotInLattice, "period is not a rational combination of D1, D2");
  Rational r1 = *a1 * rational.C1, r2 = *a2 * rational.C2;
  if (r1.get_den() != 1 || r2.get_den() != 1)
    throw Error(ErrorCode::NotInLattice, "period is not an integer combination of D1/C1, D2/C2");
  return {to_int64(r1.get_num()), to_int64(r2.get_num())};
}

RationalRelations rationalize_relations(const RealRelations& relations, std::int64_t max_den) {
  if (max_den < 2) throw Error(ErrorCode::InvalidInput, "max denominator must be at least 2");
  std::vector<std::array<Rational, 2>> a;
  bool approximated = false;
  for (auto& c : relations.coeffs) {
    std::array<Rational, 2> pair;
    for (int i = 0; i < 2; ++i) {
      if (c[i].exact) {
        pair[i] = *c[i].exact;
      } else {
        pair[i] = best_rational(static_cast<double>(c[i].value), max_den, ApproximationKind::Convergent);
        approximated = true;
      }
    }
    a.push_back(pair);
  }
  return from_fractions(std::move(a), approximated);
}

std::int64_t PeriodLattice::C1() const {
  if (!rational) throw Error(ErrorCode::NotDoublyRational, "the period relations are not rational");
  return rational->C1;
}

std::int64_t PeriodLattice::C2() const {
  if (!rational) throw Error(ErrorCode::NotDoublyRational, "the period relations are not rational");
  return rational->C2;
}

std::pair<Vec2, Vec2> PeriodLattice::generators() const {
  return {D1() / static_cast<double>(C1()), D2() / static_cast<double>(C2())};
}

PeriodLattice make_lattice(const std::vector<Period>& basis, std::optional<PairChoice> pair) {
  if (basis.size() < 2) throw Error(ErrorCode::InvalidInput, "a lattice needs at least two periods");
  PeriodLattice lat;
  lat.basis = basis;
  lat.relations = real_relations(basis, pair ? *pair : default_pair(basis));
  lat.rational = detect_drpb(lat.relations);
  return lat;
}

PeriodLattice rationalized(PeriodLattice lattice, std::int64_t max_den) {
  if (!lattice.rational) lattice.rational = rationalize_relations(lattice.relations, max_den);
  return lattice;
}

std::string lattice_report(const PeriodLattice& lat) {
  std::ostringstream os;
  os.precision(12);
  auto vec = [&](Vec2 v) {
    std::ostringstream s;
    s.precision(12);
    s << "(" << v.real() << ", " << v.imag() << ")";
    return s.str();
  };
  os << "periods " << lat.basis.size() << "\n";
  for (std::size_t k = 0; k < lat.basis.size(); ++k)
    os << "  D" << k << " = " << vec(lat.basis[k].value()) << " exact=" << lat.basis[k].vector.to_string()
       << " kind=" << to_string(lat.basis[k].kind) << "\n";
  os << "pair D1=" << vec(lat.D1()) << " D2=" << vec(lat.D2()) << "\n";
  const auto& rel = lat.relations;
  for (std::size_t i = 0; i < rel.periods.size(); ++i)
    os << "  a[D" << rel.periods[i] << "] = " << coeff_string(rel.coeffs[i][0]) << ", "
       << coeff_string(rel.coeffs[i][1]) << "\n";
  if (lat.rational) {
    os << "DRPB=" << (lat.rational->approximated ? "approximated" : "yes") << " C1=" << lat.rational->C1
       << " C2=" << lat.rational->C2 << "\n";
  } else {
    os << "DRPB=no (irrational relations)\n";
  }
  return os.str();
}

std::string lattice_csv(const PeriodLattice& lat) {
  std::ostringstream os;
  os.precision(17);
  os << "period,x,y,a1,a2,rational\n";
  const auto& rel = lat.relations;
  for (std::size_t i = 0; i < rel.periods.size(); ++i) {
    Vec2 v = lat.basis[rel.periods[i]].value();
    auto cell = [](const RelationCoeff& c) {
      if (c.exact) return to_string(*c.exact);
      std::ostringstream s;
      s.precision(17);
      s << static_cast<double>(c.value);
      return s.str();
    };
    bool exact = rel.coeffs[i][0].exact && rel.coeffs[i][1].exact;
    os << rel.periods[i] << "," << v.real() << "," << v.imag() << "," << cell(rel.coeffs[i][0]) << ","
       << cell(rel.coeffs[i][1]) << "," << (exact ? "yes" : "no") << "\n";
  }
  return os.str();
}

}  // namespace billiards
