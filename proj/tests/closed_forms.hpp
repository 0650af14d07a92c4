#pragma once

// Closed-form wave functions and levels used as independent references.

#include <cmath>
#include <complex>
#include <numbers>

#include "billiards/geometry.hpp"

namespace closed_forms {

using billiards::Vec2;

inline const double kPi = std::numbers::pi;
inline const double kS3 = std::sqrt(3.0);

// pi/3 parallelogram with the acute corner at the origin and one side on the
// x axis; plane waves of momentum (A, B).
inline std::complex<double> rhombic_dirichlet(double A, double B, Vec2 r, int sign) {
  const double x = r.real(), y = r.imag();
  auto e = [&](double t) { return std::polar(1.0, sign * A * t); };
  return e(x) * std::sin(B * y) - e(-x / 2 + kS3 * y / 2) * std::sin(B * (kS3 * x / 2 + y / 2)) +
         e(-x / 2 - kS3 * y / 2) * std::sin(B * (kS3 * x / 2 - y / 2));
}

inline double rhombic_dirichlet_cos(double A, double B, Vec2 r) {
  const double x = r.real(), y = r.imag();
  return std::cos(A * x) * std::sin(B * y) - std::cos(A * (x / 2 - kS3 * y / 2)) * std::sin(B * (kS3 * x / 2 + y / 2)) +
         std::cos(A * (x / 2 + kS3 * y / 2)) * std::sin(B * (kS3 * x / 2 - y / 2));
}

inline double rhombic_dirichlet_sin(double A, double B, Vec2 r) {
  const double x = r.real(), y = r.imag();
  return std::sin(A * x) * std::sin(B * y) + std::sin(A * (x / 2 - kS3 * y / 2)) * std::sin(B * (kS3 * x / 2 + y / 2)) -
         std::sin(A * (x / 2 + kS3 * y / 2)) * std::sin(B * (kS3 * x / 2 - y / 2));
}

inline double rhombic_neumann_cos(double A, double B, Vec2 r) {
  const double x = r.real(), y = r.imag();
  return std::cos(A * x) * std::cos(B * y) + std::cos(A * (x / 2 - kS3 * y / 2)) * std::cos(B * (kS3 * x / 2 + y / 2)) +
         std::cos(A * (x / 2 + kS3 * y / 2)) * std::cos(B * (kS3 * x / 2 - y / 2));
}

inline double rhombic_neumann_sin(double A, double B, Vec2 r) {
  const double x = r.real(), y = r.imag();
  return std::sin(A * x) * std::cos(B * y) - std::sin(A * (x / 2 - kS3 * y / 2)) * std::cos(B * (kS3 * x / 2 + y / 2)) -
         std::sin(A * (x / 2 + kS3 * y / 2)) * std::cos(B * (kS3 * x / 2 - y / 2));
}

// Parallelogram with sides q/p and 1, labels on the 60 degree pair; E = |p|^2/2.
inline double rhombic_level(double p, double m, double n) {
  return 8.0 / 9 * kPi * kPi * p * p * (m * m + n * n - m * n);
}

// Same levels on the orthogonal pair (long and short diagonal directions).
inline double rhombic_level_rotated(double p, double m, double n) {
  return 2.0 / 9 * kPi * kPi * p * p * (3 * m * m + n * n);
}

// Broken rectangle, momentum (pi m Cx / x1, pi n Cy / y1).
inline double broken_rectangle_level(double m, double n, double cx, double cy, double x1, double y1) {
  return 0.5 * kPi * kPi * (m * m * cx * cx / (x1 * x1) + n * n * cy * cy / (y1 * y1));
}

}  // namespace closed_forms
