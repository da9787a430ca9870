#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace crn {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct CrnError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses "3", "-4/7" or "0.25" (decimals are converted exactly).
Rational parse_rational(const std::string& text);

/// Renders as "p" or "p/q" with q > 0.
std::string rational_to_string(const Rational& x);

double to_double(const Rational& x);

Rational factorial(long long n);

/// Falling factorial n(n-1)...(n-r+1); zero when n < r, exact for n >= 0.
Integer falling_factorial(long long n, long long r);

}  // namespace crn
