#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "billiards/rational.hpp"

namespace billiards {

// Arithmetic in Z[zeta], zeta = exp(i*pi/n). Elements are stored as integer
// polynomials of degree < n modulo x^n + 1, so multiplication by a power of
// zeta is a signed rotation of the coefficient vector. Exact equality reduces
// modulo the cyclotomic polynomial Phi_{2n}.
//
// A context also carries an integer scale D: the geometric value of an element
// is its complex evaluation divided by D. This keeps all polygon coordinates
// integral when side lengths have denominators.
class CycloContext {
 public:
  CycloContext(int n, std::int64_t scale = 1);

  int n() const { return n_; }
  int order() const { return 2 * n_; }
  int degree() const { return static_cast<int>(phi_.size()) - 1; }
  std::int64_t scale() const { return scale_; }
  const std::vector<std::int64_t>& cyclotomic() const { return phi_; }
  const std::vector<std::pair<int, std::int64_t>>& cyclotomic_terms() const { return phi_terms_; }

  int reduce_index(long long k) const;
  std::complex<long double> root(long long k) const { return roots_[reduce_index(k)]; }

 private:
  int n_;
  std::int64_t scale_;
  std::vector<std::int64_t> phi_;
  std::vector<std::pair<int, std::int64_t>> phi_terms_;
  std::vector<std::complex<long double>> roots_;
};

using ContextPtr = std::shared_ptr<const CycloContext>;

std::vector<std::int64_t> cyclotomic_polynomial(int m);

class Cyclo {
 public:
  Cyclo() = default;
  explicit Cyclo(ContextPtr ctx);

  static Cyclo integer(ContextPtr ctx, std::int64_t c);
  static Cyclo monomial(ContextPtr ctx, std::int64_t c, long long k);
  static Cyclo from_coeffs(ContextPtr ctx, std::vector<std::int64_t> coeffs);

  const ContextPtr& context() const { return ctx_; }
  const std::vector<std::int64_t>& coeffs() const { return c_; }

  Cyclo& operator+=(const Cyclo& o);
  Cyclo& operator-=(const Cyclo& o);
  Cyclo operator-() const;
  Cyclo operator*(const Cyclo& o) const;
  Cyclo scaled(std::int64_t k) const;
  Cyclo rotated(long long k) const;
  Cyclo conj() const;

  friend Cyclo operator+(Cyclo a, const Cyclo& b) { return a += b; }
  friend Cyclo operator-(Cyclo a, const Cyclo& b) { return a -= b; }

  bool trivially_zero() const;
  bool is_zero() const;
  bool operator==(const Cyclo& o) const { return (*this - o).is_zero(); }

  // Canonical coordinates in the power basis of Q(zeta), length = degree().
  std::vector<Integer> canonical() const;

  std::complex<long double> eval() const;
  // Geometric value: eval() / scale.
  std::complex<double> value() const;
  double value_error_bound() const;

  std::string to_string() const;

 private:
  ContextPtr ctx_;
  std::vector<std::int64_t> c_;
};

// a / b when a is a rational multiple of b (b nonzero); nullopt otherwise.
std::optional<Rational> rational_ratio(const Cyclo& a, const Cyclo& b);

// 2i * cross(a, b) and 2 * dot(a, b), both exact.
Cyclo cross_2i(const Cyclo& a, const Cyclo& b);
Cyclo dot_2(const Cyclo& a, const Cyclo& b);

// Rational value of a purely rational element (canonical form c0 only).
std::optional<Rational> as_rational(const Cyclo& a);

}  // namespace billiards
