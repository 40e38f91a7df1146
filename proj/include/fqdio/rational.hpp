#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace fqdio {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "a", "a/b" or a plain decimal like "0.25".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& r);

/// k^e as an exact rational (e may be negative).
Rational k_power(unsigned k, long e);

/// Largest e with k^e <= x; x must be positive.
long floor_log_k(const Rational& x, unsigned k);

/// Returns e if x == k^e exactly, otherwise false via the flag.
bool is_k_power(const Rational& x, unsigned k, long* e);

double to_double(const Rational& r);

}  // namespace fqdio
