#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

namespace eikjump {

// Arbitrary-precision integers and rationals. cpp_rational keeps lowest
// terms and a positive denominator, which is exactly the invariant the
// text grammar below relies on.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long n, long long d = 1) { return Rat(Int(n), Int(d)); }

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline int sgn(const Rat& r) { return r.sign(); }
inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Largest integer <= r.
Int rat_floor(const Rat& r);
Int rat_ceil(const Rat& r);

double rat_to_double(const Rat& r);

// "p/q" with q omitted when 1. parse_rat accepts optional sign and blanks.
std::string rat_to_string(const Rat& r);
Rat parse_rat(std::string_view text);

// Fixed-precision decimal rendering (round half away from zero), used by
// reports and SVG output. Deterministic across platforms.
std::string rat_to_decimal(const Rat& r, int digits);

}  // namespace eikjump
