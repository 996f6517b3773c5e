#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mwvcsim {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Parses "7", "-3/4" or "0.25" into an exact rational.
/// Decimal literals become exact fractions (0.5 -> 1/2).
/// Throws std::invalid_argument on anything else.
Rat parse_rational(const std::string& text);

/// Canonical text form: "p" when the denominator is 1, else "p/q" in lowest terms.
std::string rat_str(const Rat& r);

double rat_double(const Rat& r);

/// floor(a/b) for b > 0.
BigInt floor_div(const Rat& a, const Rat& b);

/// Number of bits in the binary representation; 0 for value 0.
int bit_length(const BigInt& v);

/// Smallest integer >= r, as long long.
long long ceil_to_ll(const Rat& r);

/// Exact dyadic rational equal to the double (doubles are dyadic).
/// Throws on non-finite input.
Rat rat_from_double(double x);

}  // namespace mwvcsim
