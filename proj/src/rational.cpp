#include "covergame/rational.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace covergame {

BigInt factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative number");
  BigInt out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

namespace {

BigInt pow10(int e) {
  BigInt out = 1;
  for (int i = 0; i < e; ++i) out *= 10;
  return out;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// cpp_int reads a leading 0 as an octal prefix; decimal digit strings must
// be stripped first
BigInt from_digits(const std::string& digits) {
  const size_t first = digits.find_first_not_of('0');
  if (first == std::string::npos) return BigInt(0);
  return BigInt(digits.substr(first));
}

// "[-]ddd[.ddd][e[+-]ddd]" -> exact decimal fraction
Rational parse_decimal(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s = s.substr(1);
  }
  int exp10 = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    const std::string etxt = s.substr(epos + 1);
    s = s.substr(0, epos);
    size_t pos = 0;
    exp10 = std::stoi(etxt, &pos);
    if (pos != etxt.size()) throw std::invalid_argument("bad exponent in number: " + text);
  }
  std::string digits = s;
  int frac_digits = 0;
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    digits = s.substr(0, dot) + s.substr(dot + 1);
    frac_digits = static_cast<int>(s.size() - dot - 1);
  }
  if (!all_digits(digits)) throw std::invalid_argument("bad number: " + text);
  BigInt num = from_digits(digits);
  if (negative) num = -num;
  const int e = exp10 - frac_digits;
  if (e >= 0) return Rational(num * pow10(e), 1);
  return Rational(num, pow10(-e));
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string p = text.substr(0, slash);
    std::string q = text.substr(slash + 1);
    bool negative = false;
    if (!p.empty() && (p[0] == '+' || p[0] == '-')) {
      negative = p[0] == '-';
      p = p.substr(1);
    }
    if (!all_digits(p) || !all_digits(q)) throw std::invalid_argument("bad rational: " + text);
    BigInt den = from_digits(q);
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    BigInt num = from_digits(p);
    if (negative) num = -num;
    return Rational(num, den);
  }
  return parse_decimal(text);
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::invalid_argument("unprintable double");
  return parse_decimal(std::string(buf, ptr));
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string to_fraction_string(const Rational& value) {
  const BigInt num = numerator(value);
  const BigInt den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_decimal_string(const Rational& value, int significant_digits) {
  if (significant_digits < 1) throw std::domain_error("need at least one digit");
  if (value == 0) return "0";
  const bool negative = value < 0;
  BigInt num = negative ? BigInt(-numerator(value)) : numerator(value);
  const BigInt den = denominator(value);

  // Position of the leading digit relative to the decimal point.
  int lead = 0;
  if (num >= den) {
    BigInt ip = num / den;
    while (ip > 0) {
      ++lead;
      ip /= 10;
    }
  } else {
    BigInt scaled = num * 10;
    while (scaled < den) {
      --lead;
      scaled *= 10;
    }
  }

  // Round half up at significant_digits digits.
  const int frac = significant_digits - lead;
  BigInt scaled_num = frac >= 0 ? num * pow10(frac) : num / pow10(-frac);
  BigInt digits_int = (frac >= 0) ? (scaled_num * 2 + den) / (den * 2)
                                  : (num * 2 + den * pow10(-frac)) / (den * pow10(-frac) * 2);
  std::string digits = digits_int.str();
  if (static_cast<int>(digits.size()) > significant_digits) {
    // rounding carried into a new leading digit
    ++lead;
    digits.pop_back();
  }

  std::string out;
  if (lead <= 0) {
    out = "0." + std::string(-lead, '0') + digits;
  } else if (lead >= static_cast<int>(digits.size())) {
    out = digits + std::string(lead - digits.size(), '0');
  } else {
    out = digits.substr(0, lead) + "." + digits.substr(lead);
  }
  return negative ? "-" + out : out;
}

}  // namespace covergame
