#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace billiards {

using Integer = mpz_class;
using Rational = mpq_class;

// Accepts "p/q", "p", and finite decimals such as "0.353" or "-1.5e-2".
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

double to_double(const Rational& r);

std::int64_t to_int64(const Integer& z);

std::int64_t lcm_checked(std::int64_t a, std::int64_t b);

}  // namespace billiards
