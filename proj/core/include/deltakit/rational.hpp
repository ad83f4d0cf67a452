#pragma once

// Exact rational arithmetic used throughout the toolkit. Every quantity that
// the certificates compare (distances, norms, functional values) is a
// Rational; floating point only appears in rendered decimal approximations.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace deltakit {

using Rational = mpq_class;
using Integer = mpz_class;

/// Canonical num/den. Throws std::invalid_argument when den == 0.
Rational make_rational(long num, long den = 1);

/// Parses "p/q", "p" or "-p/q" (whitespace not allowed). Throws InputError.
Rational parse_rational(std::string_view text);

/// Always renders as "p/q" (integers become "p/1").
std::string to_string(const Rational& q);

/// Decimal rendering truncated toward zero with `digits` fractional digits.
/// The output is an approximation and is only used for human-readable
/// report columns.
std::string to_decimal(const Rational& q, int digits = 20);

/// 2^e for any integer e.
Rational pow2(long e);

inline Rational abs_value(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline const Rational& min_of(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max_of(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace deltakit
