#include "billiards/polygon.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "billiards/error.hpp"

namespace billiards {

namespace {

// Sparse polynomial with rational coefficients modulo x^n + 1.
struct QPoly {
  int n;
  std::map<int, Rational> c;

  static QPoly monomial(int n, const Rational& v, long long k) {
    QPoly r{n, {}};
    r.add(k, v);
    return r;
  }

  void add(long long k, const Rational& v) {
    long long m = k % (2LL * n);
    if (m < 0) m += 2LL * n;
    Rational s = v;
    if (m >= n) {
      m -= n;
      s = -s;
    }
    auto& slot = c[static_cast<int>(m)];
    slot += s;
    if (slot == 0) c.erase(static_cast<int>(m));
  }

  QPoly conj() const {
    QPoly r{n, {}};
    for (auto& [j, v] : c) r.add(-j, v);
    return r;
  }

  QPoly operator*(const QPoly& o) const {
    QPoly r{n, {}};
    for (auto& [i, a] : c)
      for (auto& [j, b] : o.c) r.add(i + j, a * b);
    return r;
  }

  QPoly operator-(const QPoly& o) const {
    QPoly r = *this;
    for (auto& [j, v] : o.c) r.add(j, -v);
    return r;
  }

  QPoly scaled(const Rational& s) const {
    QPoly r{n, {}};
    for (auto& [j, v] : c) r.add(j, v * s);
    return r;
  }

  FieldLength to_length() const {
    FieldLength f{n, std::vector<Rational>(n, Rational(0))};
    for (auto& [j, v] : c) f.coeffs[j] = v;
    return f;
  }
};

// 1/(zeta^d - zeta^-d) = zeta^d / (omega - 1), omega = zeta^{2d}, and
// 1/(omega - 1) = (1/M) sum_{j<M} j omega^j for a primitive M-th root omega.
QPoly inverse_sine_factor(int n, long long d) {
  long long two_d = ((2 * d) % (2LL * n) + 2LL * n) % (2LL * n);
  if (two_d == 0) throw Error(ErrorCode::SingularSystem, "the two free sides are parallel");
  long long m = 2LL * n / std::gcd(two_d, 2LL * n);
  QPoly s{n, {}};
  for (long long j = 1; j < m; ++j) s.add(d + two_d * j, Rational(static_cast<long>(j), static_cast<long>(m)));
  return s;
}

FieldLength embed(const FieldLength& f, int n) {
  if (f.n == n) return f;
  if (n % f.n != 0) throw Error(ErrorCode::InvalidInput, "length field does not embed in the angle field");
  const int step = n / f.n;
  FieldLength r{n, std::vector<Rational>(n, Rational(0))};
  for (int j = 0; j < f.n && j < static_cast<int>(f.coeffs.size()); ++j) r.coeffs[j * step] = f.coeffs[j];
  return r;
}

}  // namespace

double RationalAngle::radians() const { return std::numbers::pi * static_cast<double>(p) / static_cast<double>(q); }

RationalAngle make_angle(std::int64_t p, std::int64_t q, bool* reduced) {
  if (q == 0) throw Error(ErrorCode::InvalidInput, "angle with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  std::int64_t g = std::gcd(p, q);
  if (reduced) *reduced = g != 1;
  p /= g;
  q /= g;
  if (p <= 0 || p >= 2 * q)
    throw Error(ErrorCode::InvalidInput, "angle " + std::to_string(p) + "/" + std::to_string(q) + " outside (0, 2)");
  return {p, q};
}

RationalAngle make_angle(const Rational& fraction) {
  return make_angle(to_int64(fraction.get_num()), to_int64(fraction.get_den()));
}

FieldLength FieldLength::rational(int n, const Rational& r) {
  FieldLength f{n, std::vector<Rational>(n, Rational(0))};
  f.coeffs[0] = r;
  return f;
}

double FieldLength::value() const {
  long double s = 0;
  for (int j = 0; j < static_cast<int>(coeffs.size()); ++j)
    if (coeffs[j] != 0)
      s += static_cast<long double>(coeffs[j].get_d()) * std::cos(std::numbers::pi_v<long double> * j / n);
  return static_cast<double>(s);
}

std::optional<Rational> FieldLength::as_rational() const {
  auto ctx = std::make_shared<CycloContext>(n);
  Integer den = 1;
  for (auto& c : coeffs) den = lcm(den, Integer(c.get_den()));
  std::vector<std::int64_t> ints(n, 0);
  for (int j = 0; j < static_cast<int>(coeffs.size()); ++j) ints[j] = to_int64(Integer(coeffs[j] * den));
  auto v = billiards::as_rational(Cyclo::from_coeffs(ctx, ints));
  if (!v) return std::nullopt;
  Rational r = *v / Rational(den);
  r.canonicalize();
  return r;
}

std::string FieldLength::to_string() const {
  if (auto r = as_rational()) return billiards::to_string(*r);
  std::ostringstream os;
  bool first = true;
  for (int j = 0; j < static_cast<int>(coeffs.size()); ++j) {
    if (coeffs[j] == 0) continue;
    if (!first) os << " + ";
    os << "(" << coeffs[j].get_str() << ")";
    if (j > 0) os << "*w^" << j;
    first = false;
  }
  os << " [w=exp(i*pi/" << n << ")]";
  return os.str();
}

std::int64_t angle_lcm(const std::vector<RationalAngle>& angles) {
  std::int64_t n = 1;
  for (auto& a : angles) n = lcm_checked(n, a.q);
  if (n > (1 << 20)) throw Error(ErrorCode::InvalidInput, "angle denominators too large");
  return n;
}

std::vector<int> direction_indices(const std::vector<RationalAngle>& angles) {
  const std::int64_t n = angle_lcm(angles);
  std::vector<int> dirs(angles.size());
  std::int64_t theta = 0;
  for (std::size_t k = 0; k < angles.size(); ++k) {
    dirs[k] = static_cast<int>(theta);
    theta = ((theta + n - n / angles[k].q * angles[k].p) % (2 * n) + 2 * n) % (2 * n);
  }
  return dirs;
}

Polygon::Polygon(std::vector<RationalAngle> angles, std::vector<FieldLength> lengths, std::string name)
    : name_(std::move(name)), angles_(std::move(angles)) {
  const int count = static_cast<int>(angles_.size());
  if (count < 3) throw Error(ErrorCode::InvalidInput, "a polygon needs at least 3 sides");
  if (lengths.size() != angles_.size()) throw Error(ErrorCode::InvalidInput, "angle and length counts differ");

  Rational sum = 0;
  for (auto& a : angles_) sum += a.fraction();
  if (sum != count - 2)
    throw Error(ErrorCode::AngleSumMismatch,
                "interior angles sum to " + sum.get_str() + " pi, expected " + std::to_string(count - 2) + " pi");

  const int n = static_cast<int>(angle_lcm(angles_));
  Integer den = 1;
  for (auto& l : lengths) {
    l = embed(l, n);
    for (auto& c : l.coeffs) den = lcm(den, Integer(c.get_den()));
    if (!(l.value() > 0))
      throw Error(ErrorCode::NonpositiveLength, "side length " + l.to_string() + " is not positive");
  }
  lengths_ = std::move(lengths);
  ctx_ = std::make_shared<CycloContext>(n, to_int64(den));
  directions_ = direction_indices(angles_);

  Cyclo at(ctx_);
  for (int k = 0; k < count; ++k) {
    std::vector<std::int64_t> ints(n, 0);
    for (int j = 0; j < n; ++j) ints[j] = to_int64(Integer(lengths_[k].coeffs[j] * Rational(den)));
    sides_.push_back(Cyclo::from_coeffs(ctx_, std::move(ints)).rotated(directions_[k]));
    vertices_.push_back(at);
    at += sides_.back();
  }
  if (!at.is_zero()) {
    auto gap = at.value();
    std::ostringstream os;
    os << "side chain does not close (gap " << gap.real() << ", " << gap.imag() << ")";
    throw Error(ErrorCode::ClosureViolation, os.str());
  }
  for (auto& v : vertices_) points_.push_back(v.value());

  const double tol = 1e-9 * std::max(1.0, shortest_edge());
  for (int i = 0; i < count; ++i)
    for (int j = i + 2; j < count; ++j) {
      if (i == 0 && j == count - 1) continue;
      if (segments_intersect(points_[i], points_[(i + 1) % count], points_[j], points_[(j + 1) % count], tol))
        throw Error(ErrorCode::SelfIntersection,
                    "sides " + std::to_string(i) + " and " + std::to_string(j) + " intersect");
    }
  if (area() <= 0) throw Error(ErrorCode::SelfIntersection, "polygon is not counter-clockwise simple");
}

double Polygon::shortest_edge() const {
  double best = INFINITY;
  for (auto& s : sides_) best = std::min(best, std::abs(s.value()));
  return best;
}

Vec2 Polygon::outward_normal(int k) const {
  Vec2 d = sides_[k].value();
  d /= std::abs(d);
  return {d.imag(), -d.real()};
}

Polygon validate_polygon(const std::vector<RationalAngle>& angles, const std::vector<Rational>& lengths,
                         std::string name) {
  for (auto& l : lengths)
    if (l <= 0) throw Error(ErrorCode::NonpositiveLength, "side length " + l.get_str() + " is not positive");
  std::vector<FieldLength> f;
  for (auto& l : lengths) f.push_back(FieldLength::rational(1, l));
  return Polygon(angles, std::move(f), std::move(name));
}

std::vector<FieldLength> solve_closure(const std::vector<RationalAngle>& angles,
                                       const std::vector<std::optional<Rational>>& fixed) {
  const int count = static_cast<int>(angles.size());
  if (count < 3 || fixed.size() != angles.size())
    throw Error(ErrorCode::InvalidInput, "length list does not match angles");
  std::vector<int> free;
  for (int k = 0; k < count; ++k)
    if (!fixed[k]) free.push_back(k);
  if (free.size() != 2) throw Error(ErrorCode::InvalidInput, "exactly n-2 lengths must be fixed");

  const int n = static_cast<int>(angle_lcm(angles));
  const auto dirs = direction_indices(angles);
  QPoly b{n, {}};
  for (int k = 0; k < count; ++k)
    if (fixed[k]) b.add(dirs[k], -*fixed[k]);

  const int u = free[0], v = free[1];
  const long long delta = dirs[v] - dirs[u];
  // l_u sin(delta) = Im(conj(b) e_v); l_v sin(-delta) = Im(conj(b) e_u).
  QPoly inv = inverse_sine_factor(n, delta);
  QPoly x = b.conj() * QPoly::monomial(n, 1, dirs[v]);
  QPoly y = b.conj() * QPoly::monomial(n, 1, dirs[u]);
  QPoly lu = (x - x.conj()) * inv;
  QPoly lv = ((y - y.conj()) * inv).scaled(-1);

  std::vector<FieldLength> out;
  for (int k = 0; k < count; ++k) {
    if (k == u)
      out.push_back(lu.to_length());
    else if (k == v)
      out.push_back(lv.to_length());
    else
      out.push_back(FieldLength::rational(n, *fixed[k]));
  }
  for (int k : free)
    if (!(out[k].value() > 1e-12))
      throw Error(ErrorCode::NonpositiveLength, "solved length of side " + std::to_string(k) + " is not positive");
  for (auto& l : out)
    if (auto r = l.as_rational()) l = FieldLength::rational(n, *r);
  return out;
}

Polygon make_polygon(const std::vector<RationalAngle>& angles, const std::vector<std::optional<Rational>>& lengths,
                     std::string name) {
  bool all_fixed = true;
  for (auto& l : lengths) all_fixed = all_fixed && l.has_value();
  if (all_fixed) {
    std::vector<Rational> r;
    for (auto& l : lengths) r.push_back(*l);
    return validate_polygon(angles, r, std::move(name));
  }
  return Polygon(angles, solve_closure(angles, lengths), std::move(name));
}

}  // namespace billiards
