#include "billiards/rationalize.hpp"

#include <cmath>
#include <numbers>

#include "billiards/error.hpp"

namespace billiards {

Rational best_rational(const Rational& x, std::int64_t max_den, ApproximationKind kind) {
  if (max_den < 1) throw Error(ErrorCode::InvalidInput, "denominator cap must be positive");
  if (x.get_den() <= max_den) return x;
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  Integer n = x.get_num(), d = x.get_den();
  const Integer cap = max_den;
  while (true) {
    Integer a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    Integer q2 = q0 + a * q1;
    if (q2 > cap) break;
    Integer p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    Integer r = n - a * d;
    n = d;
    d = r;
    if (d == 0) break;
  }
  if (kind == ApproximationKind::Convergent) {
    Rational conv(p1, q1);
    conv.canonicalize();
    return conv;
  }
  Integer k;
  mpz_fdiv_q(k.get_mpz_t(), Integer(cap - q0).get_mpz_t(), q1.get_mpz_t());
  Rational conv(p1, q1), semi(p0 + k * p1, q0 + k * q1);
  conv.canonicalize();
  semi.canonicalize();
  Rational ec = abs(conv - x), es = abs(semi - x);
  if (es < ec) return semi;
  if (ec < es) return conv;
  return conv.get_den() <= semi.get_den() ? conv : semi;
}

Rational best_rational(double x, std::int64_t max_den, ApproximationKind kind) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "cannot rationalize a non-finite value");
  return best_rational(Rational(x), max_den, kind);
}

std::optional<Rational> heuristic_rational(double x, std::int64_t max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  std::vector<std::int64_t> caps;
  for (std::int64_t cap = 1; cap < max_den; cap *= 4) caps.push_back(cap);
  caps.push_back(max_den);
  for (std::int64_t cap : caps) {
    Rational r = best_rational(x, cap, ApproximationKind::Convergent);
    double q = r.get_den().get_d();
    double err = std::fabs(r.get_d() - x);
    if (err < tol && err * q * q < 1e-6) return r;
  }
  return std::nullopt;
}

std::vector<RationalAngle> rationalize_angles(const std::vector<double>& angles, std::int64_t max_den,
                                              RationalizeMode mode) {
  if (max_den < 2) throw Error(ErrorCode::InvalidInput, "denominator cap must be at least 2");
  const std::size_t n = angles.size();
  if (n < 3) throw Error(ErrorCode::InvalidInput, "a polygon needs at least 3 angles");
  std::vector<Rational> frac(n);
  std::vector<Integer> nominal(n);
  for (std::size_t k = 0; k < n; ++k) {
    double a = angles[k] / std::numbers::pi;
    if (!(a > 0 && a < 2)) throw Error(ErrorCode::InvalidInput, "angle outside (0, 2*pi)");
    Rational best = best_rational(a, max_den);
    if (std::fabs(best.get_d() - a) < 1e-12 || mode == RationalizeMode::BestApproximation) {
      frac[k] = best;
      nominal[k] = best.get_den();
    } else {
      Integer p;
      Rational scaled = Rational(a) * max_den;
      mpz_fdiv_q(p.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
      frac[k] = Rational(p, max_den);
      frac[k].canonicalize();
      nominal[k] = max_den;
    }
  }
  Rational sum = 0;
  for (auto& f : frac) sum += f;
  Rational residual = Rational(static_cast<long>(n) - 2) - sum;
  if (residual != 0) {
    std::size_t pick = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (nominal[k] >= nominal[pick]) pick = k;
    Rational adjusted = frac[pick] + residual;
    if (adjusted.get_den() > max_den || adjusted <= 0 || adjusted >= 2)
      throw Error(ErrorCode::CannotBalance, "residual " + residual.get_str() + " cannot be absorbed by angle " +
                                                frac[pick].get_str() + " within denominator cap " +
                                                std::to_string(max_den));
    frac[pick] = adjusted;
  }
  std::vector<RationalAngle> out;
  for (auto& f : frac) out.push_back(make_angle(f));
  return out;
}

}  // namespace billiards
