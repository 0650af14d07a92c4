#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "billiards/cyclo.hpp"
#include "billiards/geometry.hpp"
#include "billiards/rational.hpp"

namespace billiards {

// Interior angle (p/q)*pi.
struct RationalAngle {
  std::int64_t p = 1;
  std::int64_t q = 1;

  Rational fraction() const { return Rational(p, q); }
  double radians() const;
  std::string to_string() const { return std::to_string(p) + "/" + std::to_string(q); }
  bool operator==(const RationalAngle&) const = default;
};

// Reduces p/q to lowest terms and checks 0 < p/q < 2. Sets *reduced when the
// input was not coprime.
RationalAngle make_angle(std::int64_t p, std::int64_t q, bool* reduced = nullptr);
RationalAngle make_angle(const Rational& fraction);

// A real number of the form sum_j c_j zeta^j with rational c_j, zeta = exp(i*pi/n).
// Rational side lengths have only c_0; lengths solved from the closure
// equations live in the real cyclotomic subfield.
struct FieldLength {
  int n = 1;
  std::vector<Rational> coeffs;

  static FieldLength rational(int n, const Rational& r);
  double value() const;
  std::optional<Rational> as_rational() const;
  std::string to_string() const;
};

// Polygon traversed counter-clockwise from vertex 0 at the origin with side 0
// along the positive x axis. Side k runs from vertex k to vertex k+1 and
// angles[k] is the interior angle at vertex k+1 (the end of side k).
class Polygon {
 public:
  Polygon(std::vector<RationalAngle> angles, std::vector<FieldLength> lengths, std::string name = {});

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(angles_.size()); }
  int n_lcm() const { return ctx_->n(); }
  const ContextPtr& context() const { return ctx_; }

  const std::vector<RationalAngle>& angles() const { return angles_; }
  const std::vector<FieldLength>& lengths() const { return lengths_; }
  // Direction index of side k: the side points along angle j*pi/N.
  const std::vector<int>& directions() const { return directions_; }
  const std::vector<Cyclo>& side_vectors() const { return sides_; }
  const std::vector<Cyclo>& vertices() const { return vertices_; }
  const std::vector<Vec2>& points() const { return points_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  double shortest_edge() const;
  double area() const { return signed_area(points_); }
  bool contains(Vec2 p) const { return point_in_polygon(points_, p); }
  // Outward unit normal of side k.
  Vec2 outward_normal(int k) const;

 private:
  std::string name_;
  std::vector<RationalAngle> angles_;
  std::vector<FieldLength> lengths_;
  ContextPtr ctx_;
  std::vector<int> directions_;
  std::vector<Cyclo> sides_;
  std::vector<Cyclo> vertices_;
  std::vector<Vec2> points_;
  std::vector<std::string> warnings_;
};

std::int64_t angle_lcm(const std::vector<RationalAngle>& angles);

// Direction indices mod 2N implied by the angle sequence (side 0 at index 0).
std::vector<int> direction_indices(const std::vector<RationalAngle>& angles);

Polygon validate_polygon(const std::vector<RationalAngle>& angles, const std::vector<Rational>& lengths,
                         std::string name = {});

// Completes a partial length assignment (exactly n-2 fixed) so the polygon closes.
std::vector<FieldLength> solve_closure(const std::vector<RationalAngle>& angles,
                                       const std::vector<std::optional<Rational>>& fixed);

// Convenience: rational lengths where given, solved lengths elsewhere.
Polygon make_polygon(const std::vector<RationalAngle>& angles, const std::vector<std::optional<Rational>>& lengths,
                     std::string name = {});

}  // namespace billiards
