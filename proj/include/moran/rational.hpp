#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace moran {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal such as "0.25", "-1.5e-3" into an
/// exact rational. Throws std::invalid_argument on malformed input or a zero
/// denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" rendering; integers render without a denominator.
std::string to_fraction_string(const Rational& q);

/// Nearest double to num/den, without canonicalizing the quotient.
/// Suitable for operands with tens of thousands of bits.
double ratio_to_double(const Integer& num, const Integer& den);

inline double to_double(const Rational& q) { return ratio_to_double(q.get_num(), q.get_den()); }

/// Decimal rendering with the given number of significant digits ("%.17g").
std::string to_decimal(double x, int significant = 17);

inline std::string to_decimal(const Rational& q, int significant = 17) {
  if (sgn(q) == 0) return "0";
  return to_decimal(to_double(q), significant);
}

}  // namespace moran
