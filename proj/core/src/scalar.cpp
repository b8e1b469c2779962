#include "echowall/scalar.hpp"

#include <cstdio>

namespace echowall {

std::string scalar_traits<double>::to_string(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw BadInput("empty number literal");

  auto slash = text.find('/');
  if (slash != std::string::npos) {
    Integer num, den;
    if (mpz_set_str(num.get_mpz_t(), text.substr(0, slash).c_str(), 10) != 0)
      throw BadInput("malformed fraction: " + text);
    if (mpz_set_str(den.get_mpz_t(), text.substr(slash + 1).c_str(), 10) != 0)
      throw BadInput("malformed fraction: " + text);
    if (sgn(den) == 0) throw BadInput("zero denominator: " + text);
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  // Decimal or scientific literal.
  size_t pos = 0;
  bool neg = false;
  if (text[pos] == '+' || text[pos] == '-') {
    neg = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (ch >= '0' && ch <= '9') {
      digits += ch;
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (ch == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  long expo = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      eneg = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size()) throw BadInput("malformed exponent: " + text);
    long e = 0;
    for (; pos < text.size(); ++pos) {
      if (text[pos] < '0' || text[pos] > '9') throw BadInput("malformed exponent: " + text);
      e = e * 10 + (text[pos] - '0');
      if (e > 4096) throw BadInput("exponent out of range: " + text);
    }
    expo = eneg ? -e : e;
  }
  if (!seen_digit || pos != text.size()) throw BadInput("malformed number: " + text);

  Integer mantissa;
  mpz_set_str(mantissa.get_mpz_t(), digits.c_str(), 10);
  if (neg) mantissa = -mantissa;

  long net = expo - frac_digits;
  Integer p10;
  if (net >= 0) {
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(net));
    return Rational(mantissa * p10);
  }
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(-net));
  Rational q(mantissa, p10);
  q.canonicalize();
  return q;
}

}  // namespace echowall
