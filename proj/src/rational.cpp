#include "moran/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace moran {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Rational parse_decimal(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  long exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_part = s.substr(e + 1);
    s = s.substr(0, e);
    bool exp_negative = false;
    if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
      exp_negative = exp_part.front() == '-';
      exp_part.remove_prefix(1);
    }
    if (!all_digits(exp_part) || exp_part.size() > 6)
      throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
    exponent = std::stol(std::string(exp_part));
    if (exp_negative) exponent = -exponent;
  }

  std::string_view int_part = s;
  std::string_view frac_part;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    int_part = s.substr(0, dot);
    frac_part = s.substr(dot + 1);
  }
  if (int_part.empty() && frac_part.empty())
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");
  if ((!int_part.empty() && !all_digits(int_part)) || (!frac_part.empty() && !all_digits(frac_part)))
    throw std::invalid_argument("malformed number '" + std::string(text) + "'");

  std::string digits = std::string(int_part) + std::string(frac_part);
  Integer numerator(digits.empty() ? "0" : digits, 10);
  exponent -= static_cast<long>(frac_part.size());

  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(numerator * scale) : Rational(numerator, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::string_view num = text.substr(0, slash);
    std::string_view den = text.substr(slash + 1);
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den))
      throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
    Integer p(std::string(num), 10);
    Integer q(std::string(den), 10);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(negative ? Integer(-p) : p, q);
    r.canonicalize();
    return r;
  }
  return parse_decimal(text);
}

std::string to_fraction_string(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double ratio_to_double(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("ratio_to_double: zero denominator");
  if (num == 0) return 0.0;
  const bool negative = (sgn(num) < 0) != (sgn(den) < 0);
  Integer n = abs(num), d = abs(den);
  // Scale so the integer quotient carries at least 55 bits, then round the
  // quotient to 53 bits, half to even, with the remainder as sticky bit.
  const long shift = static_cast<long>(mpz_sizeinbase(d.get_mpz_t(), 2)) -
                     static_cast<long>(mpz_sizeinbase(n.get_mpz_t(), 2)) + 55;
  if (shift > 0)
    mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  else
    mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
  Integer quot, rem;
  mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  const long drop = static_cast<long>(mpz_sizeinbase(quot.get_mpz_t(), 2)) - 53;
  Integer mant;
  mpz_tdiv_q_2exp(mant.get_mpz_t(), quot.get_mpz_t(), static_cast<mp_bitcnt_t>(drop));
  const bool half = mpz_tstbit(quot.get_mpz_t(), static_cast<mp_bitcnt_t>(drop - 1));
  const bool below_half = mpz_scan1(quot.get_mpz_t(), 0) < static_cast<mp_bitcnt_t>(drop - 1);
  const bool sticky = below_half || rem != 0;
  if (half && (sticky || mpz_odd_p(mant.get_mpz_t()))) ++mant;
  const double r = std::ldexp(mant.get_d(), static_cast<int>(drop - shift));
  return negative ? -r : r;
}

std::string to_decimal(double x, int significant) {
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant, x);
  return buf;
}

}  // namespace moran
