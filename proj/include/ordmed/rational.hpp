#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ordmed {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", an integer, or a finite decimal such as "-0.125". Throws on malformed text.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& q);

Rational power(const Rational& base, long exponent);

Integer ceil_of(const Rational& q);
Integer floor_of(const Rational& q);

/// Smallest integer s with base^s >= value, for base > 1 and value > 0.
long ceil_log(const Rational& base, const Rational& value);

/// Largest integer s with base^s <= value, for base > 1 and value > 0.
long floor_log(const Rational& base, const Rational& value);

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

double to_double(const Rational& q);

std::vector<std::string> to_strings(const std::vector<Rational>& v);

}  // namespace ordmed
