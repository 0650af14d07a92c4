#include "billiards/cyclo.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "billiards/error.hpp"

namespace billiards {

namespace {

using Poly = std::vector<std::int64_t>;

std::int64_t narrow(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw Error(ErrorCode::ArithmeticOverflow, "cyclotomic coefficient exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

std::int64_t add_checked(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw Error(ErrorCode::ArithmeticOverflow, "cyclotomic coefficient exceeds 64 bits");
  return r;
}

std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw Error(ErrorCode::ArithmeticOverflow, "cyclotomic coefficient exceeds 64 bits");
  return r;
}

// Exact division by a monic polynomial; the remainder must vanish.
Poly divide_exact(Poly num, const Poly& den) {
  const int dn = static_cast<int>(den.size()) - 1;
  const int nn = static_cast<int>(num.size()) - 1;
  Poly q(nn - dn + 1, 0);
  for (int i = nn; i >= dn; --i) {
    std::int64_t f = num[i];
    if (f == 0) continue;
    q[i - dn] = f;
    for (int j = 0; j <= dn; ++j)
      if (den[j] != 0)
        num[i - dn + j] = narrow(static_cast<__int128>(num[i - dn + j]) - static_cast<__int128>(f) * den[j]);
  }
  for (int i = 0; i < dn; ++i)
    if (num[i] != 0) throw Error(ErrorCode::ArithmeticOverflow, "cyclotomic division left a remainder");
  return q;
}

const Poly& cyclotomic_cached(int m, std::map<int, Poly>& memo) {
  if (auto it = memo.find(m); it != memo.end()) return it->second;
  Poly p(m + 1, 0);
  p[0] = -1;
  p[m] = 1;
  for (int d = 1; d < m; ++d)
    if (m % d == 0) p = divide_exact(std::move(p), cyclotomic_cached(d, memo));
  return memo.emplace(m, std::move(p)).first->second;
}

}  // namespace

std::vector<std::int64_t> cyclotomic_polynomial(int m) {
  if (m < 1) throw Error(ErrorCode::InvalidInput, "cyclotomic index must be positive");
  std::map<int, Poly> memo;
  return cyclotomic_cached(m, memo);
}

CycloContext::CycloContext(int n, std::int64_t scale) : n_(n), scale_(scale) {
  if (n < 1) throw Error(ErrorCode::InvalidInput, "cyclotomic context needs n >= 1");
  if (scale < 1) throw Error(ErrorCode::InvalidInput, "context scale must be positive");
  phi_ = cyclotomic_polynomial(2 * n);
  for (int j = 0; j + 1 < static_cast<int>(phi_.size()); ++j)
    if (phi_[j] != 0) phi_terms_.emplace_back(j, phi_[j]);
  roots_.resize(2 * n);
  const long double pi = std::numbers::pi_v<long double>;
  for (int k = 0; k < 2 * n; ++k) {
    // Exact values at the axis points keep the float projection clean.
    long double c, s;
    if (k == 0) {
      c = 1;
      s = 0;
    } else if (2 * k == n) {
      c = 0;
      s = 1;
    } else if (k == n) {
      c = -1;
      s = 0;
    } else if (2 * k == 3 * n) {
      c = 0;
      s = -1;
    } else {
      c = std::cos(pi * k / n);
      s = std::sin(pi * k / n);
    }
    roots_[k] = {c, s};
  }
}

int CycloContext::reduce_index(long long k) const {
  long long m = k % (2LL * n_);
  if (m < 0) m += 2LL * n_;
  return static_cast<int>(m);
}

Cyclo::Cyclo(ContextPtr ctx) : ctx_(std::move(ctx)), c_(ctx_->n(), 0) {}

Cyclo Cyclo::integer(ContextPtr ctx, std::int64_t c) {
  Cyclo z(std::move(ctx));
  z.c_[0] = c;
  return z;
}

Cyclo Cyclo::monomial(ContextPtr ctx, std::int64_t c, long long k) {
  Cyclo z(std::move(ctx));
  int j = z.ctx_->reduce_index(k);
  const int n = z.ctx_->n();
  if (j < n)
    z.c_[j] = c;
  else
    z.c_[j - n] = -c;
  return z;
}

Cyclo Cyclo::from_coeffs(ContextPtr ctx, std::vector<std::int64_t> coeffs) {
  if (static_cast<int>(coeffs.size()) != ctx->n())
    throw Error(ErrorCode::InvalidInput, "coefficient vector has wrong length");
  Cyclo z;
  z.ctx_ = std::move(ctx);
  z.c_ = std::move(coeffs);
  return z;
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (o.c_[i] != 0) c_[i] = add_checked(c_[i], o.c_[i]);
  return *this;
}

Cyclo& Cyclo::operator-=(const Cyclo& o) {
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (o.c_[i] != 0) c_[i] = narrow(static_cast<__int128>(c_[i]) - o.c_[i]);
  return *this;
}

Cyclo Cyclo::operator-() const {
  Cyclo z(*this);
  for (auto& v : z.c_) v = narrow(-static_cast<__int128>(v));
  return z;
}

Cyclo Cyclo::scaled(std::int64_t k) const {
  Cyclo z(*this);
  for (auto& v : z.c_)
    if (v != 0) v = mul_checked(v, k);
  return z;
}

Cyclo Cyclo::operator*(const Cyclo& o) const {
  const int n = ctx_->n();
  std::vector<int> ia, ib;
  for (int i = 0; i < n; ++i) {
    if (c_[i] != 0) ia.push_back(i);
    if (o.c_[i] != 0) ib.push_back(i);
  }
  std::vector<__int128> acc(n, 0);
  for (int i : ia)
    for (int j : ib) {
      __int128 prod = static_cast<__int128>(c_[i]) * o.c_[j];
      int k = i + j;
      if (k < n)
        acc[k] += prod;
      else
        acc[k - n] -= prod;
    }
  Cyclo z(ctx_);
  for (int k = 0; k < n; ++k) z.c_[k] = narrow(acc[k]);
  return z;
}

Cyclo Cyclo::rotated(long long k) const {
  const int n = ctx_->n();
  const int shift = ctx_->reduce_index(k);
  Cyclo z(ctx_);
  for (int j = 0; j < n; ++j) {
    if (c_[j] == 0) continue;
    int t = j + shift;
    if (t >= 2 * n) t -= 2 * n;
    if (t < n)
      z.c_[t] += c_[j];
    else
      z.c_[t - n] -= c_[j];
  }
  return z;
}

Cyclo Cyclo::conj() const {
  const int n = ctx_->n();
  Cyclo z(ctx_);
  z.c_[0] = c_[0];
  for (int j = 1; j < n; ++j) z.c_[n - j] = -c_[j];
  return z;
}

bool Cyclo::trivially_zero() const {
  for (auto v : c_)
    if (v != 0) return false;
  return true;
}

std::complex<long double> Cyclo::eval() const {
  std::complex<long double> s = 0;
  for (int j = 0; j < static_cast<int>(c_.size()); ++j)
    if (c_[j] != 0) s += static_cast<long double>(c_[j]) * ctx_->root(j);
  return s;
}

std::complex<double> Cyclo::value() const {
  auto v = eval() / static_cast<long double>(ctx_->scale());
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

double Cyclo::value_error_bound() const {
  long double l1 = 0;
  for (auto v : c_) l1 += std::fabs(static_cast<long double>(v));
  return static_cast<double>(l1 * 1e-16L / ctx_->scale());
}

std::vector<Integer> Cyclo::canonical() const {
  const int n = ctx_->n();
  const int deg = ctx_->degree();
  std::vector<Integer> r(n);
  for (int i = 0; i < n; ++i) r[i] = static_cast<long>(c_[i]);
  for (int d = n - 1; d >= deg; --d) {
    if (r[d] == 0) continue;
    Integer f = r[d];
    for (auto [j, pj] : ctx_->cyclotomic_terms()) r[d - deg + j] -= f * static_cast<long>(pj);
    r[d] = 0;
  }
  r.resize(deg);
  return r;
}

bool Cyclo::is_zero() const {
  if (trivially_zero()) return true;
  auto v = eval();
  long double mag = std::abs(v);
  long double l1 = 0;
  for (auto c : c_) l1 += std::fabs(static_cast<long double>(c));
  if (mag > l1 * 1e-12L) return false;
  for (const auto& x : canonical())
    if (x != 0) return false;
  return true;
}

std::string Cyclo::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int j = 0; j < static_cast<int>(c_.size()); ++j) {
    if (c_[j] == 0) continue;
    std::int64_t v = c_[j];
    if (!first)
      os << (v < 0 ? " - " : " + ");
    else if (v < 0)
      os << "-";
    std::int64_t a = v < 0 ? -v : v;
    if (j == 0)
      os << a;
    else {
      if (a != 1) os << a << "*";
      os << "w^" << j;
    }
    first = false;
  }
  if (first) os << "0";
  if (ctx_ && ctx_->scale() != 1) return "(" + os.str() + ")/" + std::to_string(ctx_->scale());
  return os.str();
}

std::optional<Rational> rational_ratio(const Cyclo& a, const Cyclo& b) {
  auto cb = b.canonical();
  auto ca = a.canonical();
  int pivot = -1;
  for (int i = 0; i < static_cast<int>(cb.size()); ++i)
    if (cb[i] != 0) {
      pivot = i;
      break;
    }
  if (pivot < 0) throw Error(ErrorCode::SingularSystem, "ratio with zero denominator");
  for (int i = 0; i < static_cast<int>(cb.size()); ++i)
    if (ca[i] * cb[pivot] != cb[i] * ca[pivot]) return std::nullopt;
  Rational r(ca[pivot], cb[pivot]);
  r.canonicalize();
  return r;
}

Cyclo cross_2i(const Cyclo& a, const Cyclo& b) { return a.conj() * b - a * b.conj(); }

Cyclo dot_2(const Cyclo& a, const Cyclo& b) { return a.conj() * b + a * b.conj(); }

std::optional<Rational> as_rational(const Cyclo& a) {
  auto c = a.canonical();
  for (std::size_t i = 1; i < c.size(); ++i)
    if (c[i] != 0) return std::nullopt;
  return Rational(c.empty() ? Integer(0) : c[0]);
}

}  // namespace billiards
