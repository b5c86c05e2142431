#pragma once

#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace relpoly {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

//! Parses "3", "-0.125", "1.5e-3" or "19/21" into an exact rational.
//! Decimal strings are read digit by digit, so "0.1" becomes exactly 1/10.
//! Throws std::invalid_argument on malformed text.
Rational parse_rational(std::string_view text);

//! Exact value of a finite double.
Rational to_rational(double value);

double to_double(const Rational& value);

BigInt binomial_exact(unsigned n, unsigned k);

} // namespace relpoly
