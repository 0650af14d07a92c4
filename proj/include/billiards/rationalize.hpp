#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "billiards/polygon.hpp"
#include "billiards/rational.hpp"

namespace billiards {

enum class ApproximationKind {
  // Closest fraction with denominator <= max_den among the convergents and
  // semiconvergents; ties go to the smaller denominator.
  Closest,
  // Last continued-fraction convergent with denominator <= max_den (minimises
  // |q*x - p|). Always satisfies |x - p/q| < 1/(q*max_den).
  Convergent,
};

Rational best_rational(double x, std::int64_t max_den, ApproximationKind kind = ApproximationKind::Closest);
Rational best_rational(const Rational& x, std::int64_t max_den, ApproximationKind kind = ApproximationKind::Closest);

// Heuristic rationality test for floating values: accepted when a convergent
// with denominator <= max_den is within tol and the continued fraction has
// effectively terminated there (next partial quotient beyond max_den).
std::optional<Rational> heuristic_rational(double x, std::int64_t max_den = 1000000, double tol = 1e-9);

enum class RationalizeMode {
  BestApproximation,
  // floor(a * Q) / Q, i.e. keep the leading decimal digits when Q = 10^k.
  DecimalTruncation,
};

// Angles are given in radians. The residual needed to restore the angle sum
// (n-2)*pi goes to the angle with the largest denominator (last one on ties).
std::vector<RationalAngle> rationalize_angles(const std::vector<double>& angles, std::int64_t max_den,
                                              RationalizeMode mode = RationalizeMode::BestApproximation);

}  // namespace billiards
