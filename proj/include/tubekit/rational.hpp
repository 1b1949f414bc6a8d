#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace tubekit {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Parses "p/q", "p", or a finite decimal such as "1.5" into an exact rational.
Rational parse_rational(std::string_view text);

/// Formats as "p/q" in lowest terms (always with a denominator).
std::string format_rational(const Rational& r);

/// Largest integer <= r.
BigInt floor_div(const Rational& r);
/// Smallest integer >= r.
BigInt ceil_div(const Rational& r);

/// True when the reduced denominator is a power of two.
bool is_dyadic(const Rational& r);

/// r * 2^m, which must be an integer that fits in int64; throws DomainError otherwise.
std::int64_t to_grid_index(const Rational& r, int m);

/// k / 2^m in lowest terms.
Rational from_grid_index(std::int64_t k, int m);

double to_double(const Rational& r);

}  // namespace tubekit
