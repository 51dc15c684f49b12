#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "covergame/rational.hpp"

using namespace covergame;

TEST_CASE("fraction strings parse exactly") {
  CHECK(parse_rational("3/5") == Rational(3, 5));
  CHECK(parse_rational("-3/5") == Rational(-3, 5));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("239847239847928374928374/2") ==
        Rational(BigInt("239847239847928374928374"), 2));
}

TEST_CASE("decimals become exact decimal fractions") {
  CHECK(parse_rational("0.5") == Rational(1, 2));
  CHECK(parse_rational("0.418") == Rational(209, 500));
  CHECK(parse_rational("1e-9") == Rational(1, 1000000000));
  CHECK(parse_rational("2.5e2") == Rational(250));
  CHECK(parse_rational("-0.25") == Rational(-1, 4));
  CHECK(parse_rational("1.000") == Rational(1));
}

TEST_CASE("bad numerals are rejected") {
  CHECK_THROWS(parse_rational("a/b"));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("1.2.3"));
  CHECK_THROWS(parse_rational(""));
  CHECK_THROWS(parse_rational("1e"));
}

TEST_CASE("doubles round-trip through their shortest decimal form") {
  CHECK(rational_from_double(0.1) == Rational(1, 10));
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(3.0) == Rational(3));
  CHECK(rational_from_double(0.418) == Rational(209, 500));
}

TEST_CASE("fraction rendering") {
  CHECK(to_fraction_string(Rational(2, 3)) == "2/3");
  CHECK(to_fraction_string(Rational(4)) == "4");
  CHECK(to_fraction_string(Rational(-1, 2)) == "-1/2");
  CHECK(to_fraction_string(Rational(0)) == "0");
}

TEST_CASE("decimal rendering with fixed significant digits") {
  CHECK(to_decimal_string(Rational(2, 3), 12) == "0.666666666667");
  CHECK(to_decimal_string(Rational(1), 12) == "1.00000000000");
  CHECK(to_decimal_string(Rational(0), 12) == "0");
  CHECK(to_decimal_string(Rational(1, 8), 3) == "0.125");
  CHECK(to_decimal_string(Rational(1, 2), 1) == "0.5");
  CHECK(to_decimal_string(Rational(1, 20), 1) == "0.05");
  CHECK(to_decimal_string(Rational(999, 1000), 2) == "1.0");
  CHECK(to_decimal_string(Rational(-2, 3), 3) == "-0.667");
}

TEST_CASE("factorials") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(5) == 120);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
  CHECK_THROWS(factorial(-1));
}
