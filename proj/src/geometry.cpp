#include "billiards/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace billiards {

Box bounding_box(const std::vector<Vec2>& pts) {
  Box b{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
        {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
  for (auto p : pts) {
    b.lo = {std::min(b.lo.real(), p.real()), std::min(b.lo.imag(), p.imag())};
    b.hi = {std::max(b.hi.real(), p.real()), std::max(b.hi.imag(), p.imag())};
  }
  return b;
}

bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    Vec2 a = poly[i], b = poly[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (p.real() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  Vec2 d = b - a;
  double len2 = std::norm(d);
  double t = len2 > 0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
  return std::abs(p - (a + t * d));
}

double distance_to_boundary(const std::vector<Vec2>& poly, Vec2 p) {
  double best = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, distance_to_segment(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

double signed_area(const std::vector<Vec2>& poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) s += cross(poly[i], poly[(i + 1) % poly.size()]);
  return s / 2;
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol) {
  if (distance_to_segment(a, c, d) < tol || distance_to_segment(b, c, d) < tol || distance_to_segment(c, a, b) < tol ||
      distance_to_segment(d, a, b) < tol)
    return true;
  double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

std::vector<std::array<int, 3>> triangulate(const std::vector<Vec2>& poly) {
  std::vector<int> idx(poly.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<std::array<int, 3>> tris;
  auto inside_tri = [](Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
    return cross(b - a, p - a) > 1e-14 && cross(c - b, p - b) > 1e-14 && cross(a - c, p - c) > 1e-14;
  };
  while (idx.size() > 3) {
    const std::size_t m = idx.size();
    bool clipped = false;
    for (std::size_t i = 0; i < m && !clipped; ++i) {
      int ia = idx[(i + m - 1) % m], ib = idx[i], ic = idx[(i + 1) % m];
      Vec2 a = poly[ia], b = poly[ib], c = poly[ic];
      if (cross(b - a, c - b) <= 1e-14) continue;
      bool ear = true;
      for (int j : idx)
        if (j != ia && j != ib && j != ic && inside_tri(poly[j], a, b, c)) {
          ear = false;
          break;
        }
      if (!ear) continue;
      tris.push_back({ia, ib, ic});
      idx.erase(idx.begin() + static_cast<long>(i));
      clipped = true;
    }
    if (!clipped) break;
  }
  if (idx.size() == 3) tris.push_back({idx[0], idx[1], idx[2]});
  return tris;
}

std::vector<QuadraturePoint> polygon_quadrature(const std::vector<Vec2>& poly) {
  static constexpr double xg[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
  static constexpr double wg[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
  std::vector<QuadraturePoint> out;
  for (auto [ia, ib, ic] : triangulate(poly)) {
    Vec2 a = poly[ia], b = poly[ib], c = poly[ic];
    double jac = std::abs(cross(b - a, c - a));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double u = (xg[i] + 1) / 2, v = (xg[j] + 1) / 2;
        out.push_back({a + u * (b - a) + u * v * (c - b), wg[i] * wg[j] / 4 * u * jac});
      }
  }
  return out;
}

}  // namespace billiards
