#include "billiards/rational.hpp"

#include <cctype>
#include <numeric>

#include "billiards/error.hpp"

namespace billiards {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw Error(ErrorCode::InvalidInput, "not an integer: '" + std::string(s) + "'");
  Integer z(std::string(s), 10);
  return neg ? Integer(-z) : z;
}

Rational parse_decimal(std::string_view s) {
  std::string_view mant = s;
  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mant = s.substr(0, e);
    exponent = to_int64(parse_integer(s.substr(e + 1)));
    if (exponent < -300 || exponent > 300) throw Error(ErrorCode::InvalidInput, "exponent out of range");
  }
  bool neg = false;
  if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
    neg = mant[0] == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  long frac = 0;
  if (auto dot = mant.find('.'); dot != std::string_view::npos) {
    std::string_view ip = mant.substr(0, dot), fp = mant.substr(dot + 1);
    if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty()))
      throw Error(ErrorCode::InvalidInput, "malformed number: '" + std::string(s) + "'");
    digits = std::string(ip) + std::string(fp);
    frac = static_cast<long>(fp.size());
  } else {
    if (!all_digits(mant)) throw Error(ErrorCode::InvalidInput, "malformed number: '" + std::string(s) + "'");
    digits = std::string(mant);
  }
  Integer num(digits, 10);
  if (neg) num = -num;
  long shift = exponent - frac;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift < 0 ? Rational(num, ten_pow) : Rational(num * ten_pow);
  r.canonicalize();
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::InvalidInput, "empty number");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::InvalidInput, "zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  return parse_decimal(text);
}

std::string to_string(const Rational& r) { return r.get_str(); }

double to_double(const Rational& r) { return r.get_d(); }

std::int64_t to_int64(const Integer& z) {
  if (!mpz_fits_slong_p(z.get_mpz_t())) throw Error(ErrorCode::ArithmeticOverflow, "integer exceeds 64 bits");
  return z.get_si();
}

std::int64_t lcm_checked(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  std::int64_t g = std::gcd(a, b);
  std::int64_t out;
  if (__builtin_mul_overflow(a / g, b, &out)) throw Error(ErrorCode::ArithmeticOverflow, "lcm overflow");
  return out < 0 ? -out : out;
}

}  // namespace billiards
