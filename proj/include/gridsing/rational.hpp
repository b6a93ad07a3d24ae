#pragma once

// Exact rational arithmetic for grid and domain geometry (GMP-backed).

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace gridsing {

using Rational = mpq_class;
using Integer = mpz_class;
using RationalVec = std::vector<Rational>;

/// Parses "p/q", "p", or a finite decimal such as "-0.125" exactly.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" (or "p" for integers).
std::string to_string(const Rational& q);

/// Exact conversion; every finite double is a dyadic rational.
Rational from_double(double x);

double to_double(const Rational& q);

Integer floor(const Rational& q);
Integer ceil(const Rational& q);

/// Nearest integer, ties towards +infinity.
Integer round_half_up(const Rational& q);

}  // namespace gridsing
