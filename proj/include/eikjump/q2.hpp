#pragma once

#include <compare>
#include <string>
#include <string_view>

#include "eikjump/rational.hpp"

namespace eikjump {

// Element of the field Q[sqrt(2)]: a + b*sqrt(2) with rational a, b.
// All comparisons are exact sign computations; no floating point.
struct Q2 {
  Rat a;  // rational part
  Rat b;  // coefficient of sqrt(2)

  Q2() = default;
  Q2(Rat ra) : a(std::move(ra)), b(0) {}
  Q2(long long n) : a(rat(n)), b(0) {}
  Q2(Rat ra, Rat rb) : a(std::move(ra)), b(std::move(rb)) {}

  bool is_rational() const { return b == 0; }
  bool is_zero() const { return a == 0 && b == 0; }
};

inline Q2 q2_sqrt2(Rat coeff = Rat(1)) { return Q2(Rat(0), std::move(coeff)); }

Q2 operator+(const Q2& x, const Q2& y);
Q2 operator-(const Q2& x, const Q2& y);
Q2 operator-(const Q2& x);
Q2 operator*(const Q2& x, const Q2& y);
Q2 operator/(const Q2& x, const Q2& y);  // throws DivisionByZero
inline Q2& operator+=(Q2& x, const Q2& y) { return x = x + y; }
inline Q2& operator-=(Q2& x, const Q2& y) { return x = x - y; }
inline Q2& operator*=(Q2& x, const Q2& y) { return x = x * y; }
inline Q2& operator/=(Q2& x, const Q2& y) { return x = x / y; }

// Sign of a + b*sqrt(2), decided from sign(a), sign(b) and a^2 vs 2b^2.
int sign(const Q2& x);

inline bool operator==(const Q2& x, const Q2& y) { return x.a == y.a && x.b == y.b; }
inline bool operator!=(const Q2& x, const Q2& y) { return !(x == y); }
inline bool operator<(const Q2& x, const Q2& y) { return sign(x - y) < 0; }
inline bool operator>(const Q2& x, const Q2& y) { return sign(x - y) > 0; }
inline bool operator<=(const Q2& x, const Q2& y) { return sign(x - y) <= 0; }
inline bool operator>=(const Q2& x, const Q2& y) { return sign(x - y) >= 0; }

Q2 q2_abs(const Q2& x);
Q2 q2_min(const Q2& x, const Q2& y);
Q2 q2_max(const Q2& x, const Q2& y);

double q2_to_double(const Q2& x);

// Canonical text: "p/q", "r/s sqrt2", "p/q + r/s sqrt2" or "p/q - r/s sqrt2".
// The parser also accepts "*" between coefficient and sqrt2 and is
// whitespace-insensitive, so e.g. "3/2+1/4*sqrt2" round-trips.
std::string q2_to_string(const Q2& x);
Q2 parse_q2(std::string_view text);

std::string q2_to_decimal(const Q2& x, int digits = 12);

}  // namespace eikjump
