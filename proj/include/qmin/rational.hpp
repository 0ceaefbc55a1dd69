#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qmin {

/// Arbitrary-precision rational used for every probability and cost.
using Rational = mpq_class;

/// Parses "p/q", an integer, or a decimal literal such as "-2.0915" or "1e-3".
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers are printed without a denominator.
std::string to_string(const Rational& value);

/// Fixed-point rendering with `digits` fractional digits, rounded half-to-even.
/// With `trim`, trailing zeros (and a dangling point) are removed.
std::string to_decimal(const Rational& value, int digits, bool trim = false);

double to_double(const Rational& value);

}  // namespace qmin
