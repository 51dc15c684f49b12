#ifndef COVERGAME_RATIONAL_HPP
#define COVERGAME_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace covergame {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(int n);

/// Parses "p/q", integers, decimals and scientific notation ("0.418",
/// "1e-9") into an exact rational; decimals become exact decimal fractions.
Rational parse_rational(const std::string& text);

/// Exact decimal-fraction rational for a double, recovered from its
/// shortest round-trip representation (so 0.1 becomes 1/10, not the
/// nearest dyadic).
Rational rational_from_double(double value);

double to_double(const Rational& value);

/// "p/q" for non-integers, plain digits otherwise.
std::string to_fraction_string(const Rational& value);

/// Exact fixed-point decimal rendering with the given number of
/// significant digits (round half up). Values are expected in [0, 10).
std::string to_decimal_string(const Rational& value, int significant_digits);

inline Rational default_tolerance() { return Rational(1, 1000000000); }

}  // namespace covergame

#endif
