#pragma once

#include <array>
#include <complex>
#include <vector>

namespace billiards {

using Vec2 = std::complex<double>;

inline double dot(Vec2 a, Vec2 b) { return a.real() * b.real() + a.imag() * b.imag(); }
inline double cross(Vec2 a, Vec2 b) { return a.real() * b.imag() - a.imag() * b.real(); }

struct Box {
  Vec2 lo, hi;
};

Box bounding_box(const std::vector<Vec2>& pts);

// Even-odd test; points on the boundary may go either way.
bool point_in_polygon(const std::vector<Vec2>& poly, Vec2 p);

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b);

double distance_to_boundary(const std::vector<Vec2>& poly, Vec2 p);

double signed_area(const std::vector<Vec2>& poly);

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d, double tol);

// Ear clipping of a simple counter-clockwise polygon; returns index triples.
std::vector<std::array<int, 3>> triangulate(const std::vector<Vec2>& poly);

struct QuadraturePoint {
  Vec2 x;
  double w;
};

// 16-point collapsed Gauss-Legendre rule (4x4) on each triangle.
std::vector<QuadraturePoint> polygon_quadrature(const std::vector<Vec2>& poly);

}  // namespace billiards
