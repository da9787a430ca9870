#include "crn/rational.hpp"

#include <cctype>

namespace crn {

namespace {

// Strict base-10 integer; cpp_int's string constructor would read a
// leading 0 as an octal prefix.
Integer decimal_integer(const std::string& text) {
  std::size_t start = 0;
  bool negative = false;
  if (start < text.size() && (text[start] == '+' || text[start] == '-')) {
    negative = text[start] == '-';
    ++start;
  }
  if (start == text.size()) throw CrnError("bad integer literal '" + text + "'");
  Integer v = 0;
  for (std::size_t i = start; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9')
      throw CrnError("bad integer literal '" + text + "'");
    v = v * 10 + (text[i] - '0');
  }
  return negative ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw CrnError("empty rational literal");
  std::size_t slash = text.find('/');
  if (slash != std::string::npos) {
    Integer num = decimal_integer(text.substr(0, slash));
    Integer den = decimal_integer(text.substr(slash + 1));
    if (den == 0) throw CrnError("zero denominator in '" + text + "'");
    return Rational(num, den);
  }
  std::size_t dot = text.find('.');
  if (dot != std::string::npos) {
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      throw CrnError("bad rational literal '" + text + "'");
    Integer num = decimal_integer(digits);
    Integer den = 1;
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(num, den);
  }
  return Rational(decimal_integer(text));
}

std::string rational_to_string(const Rational& x) {
  std::string s = numerator(x).str();
  if (denominator(x) != 1) s += "/" + denominator(x).str();
  return s;
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

Rational factorial(long long n) {
  if (n < 0) throw CrnError("factorial of negative argument");
  Integer f = 1;
  for (long long i = 2; i <= n; ++i) f *= i;
  return Rational(f);
}

Integer falling_factorial(long long n, long long r) {
  if (r < 0) throw CrnError("negative order in falling factorial");
  if (n < r) return 0;
  Integer f = 1;
  for (long long i = 0; i < r; ++i) f *= (n - i);
  return f;
}

}  // namespace crn
