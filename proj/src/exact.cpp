#include "relpoly/exact.hpp"

#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace relpoly {

namespace {

BigInt pow10(unsigned e)
{
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i)
    r *= 10;
  return r;
}

Rational parse_decimal(std::string_view s, std::string_view original)
{
  auto fail = [&] {
    throw std::invalid_argument("not a number: '" + std::string(original) +
                                "'");
  };
  if (s.empty())
    fail();

  bool negative = false;
  std::size_t i = 0;
  if (s[i] == '+' || s[i] == '-') {
    negative = s[i] == '-';
    ++i;
  }

  BigInt digits = 0;
  long exponent = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point)
        --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit)
    fail();

  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E')
      fail();
    ++i;
    std::string rest(s.substr(i));
    if (rest.empty())
      fail();
    std::size_t used = 0;
    long e = 0;
    try {
      e = std::stol(rest, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != rest.size() || e > 4000 || e < -4000)
      fail();
    exponent += e;
  }

  Rational r = exponent >= 0
                 ? Rational(digits * pow10(static_cast<unsigned>(exponent)))
                 : Rational(digits, pow10(static_cast<unsigned>(-exponent)));
  return negative ? Rational(-r) : r;
}

} // namespace

Rational parse_rational(std::string_view text)
{
  auto slash = text.find('/');
  if (slash == std::string_view::npos)
    return parse_decimal(text, text);
  Rational num = parse_decimal(text.substr(0, slash), text);
  Rational den = parse_decimal(text.substr(slash + 1), text);
  if (den == 0)
    throw std::invalid_argument("zero denominator in '" + std::string(text) +
                                "'");
  return num / den;
}

Rational to_rational(double value)
{
  if (!std::isfinite(value))
    throw std::invalid_argument("to_rational: non-finite value");
  if (value == 0.0)
    return Rational(0);
  int exp = 0;
  double mant = std::frexp(value, &exp); // value = mant * 2^exp, |mant| in [0.5,1)
  auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  BigInt num = scaled;
  exp -= 53;
  if (exp >= 0)
    return Rational(num << exp);
  return Rational(num, BigInt(1) << -exp);
}

double to_double(const Rational& value)
{
  return value.convert_to<double>();
}

BigInt binomial_exact(unsigned n, unsigned k)
{
  if (k > n)
    return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

} // namespace relpoly
