#include "eikjump/q2.hpp"

#include <cctype>
#include <sstream>

#include "eikjump/errors.hpp"

namespace eikjump {

Int rat_floor(const Rat& r) {
  Int n = rat_num(r), d = rat_den(r);
  Int q = n / d;
  if (n < 0 && q * d != n) --q;
  return q;
}

Int rat_ceil(const Rat& r) { return -rat_floor(Rat(-r)); }

double rat_to_double(const Rat& r) { return r.convert_to<double>(); }

std::string rat_to_string(const Rat& r) {
  std::string s = rat_num(r).str();
  if (rat_den(r) != 1) s += "/" + rat_den(r).str();
  return s;
}

std::string rat_to_decimal(const Rat& r, int digits) {
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rat scaled = r * scale;
  Int n = rat_num(scaled), d = rat_den(scaled);
  Int q = n / d, rem = n % d;
  // round half away from zero
  if (rat_abs(Rat(rem, d)) * 2 >= 1) q += (n < 0 ? -1 : 1);
  bool neg = q < 0;
  std::string ds = Int(boost::multiprecision::abs(q)).str();
  if ((int)ds.size() <= digits) ds.insert(0, digits + 1 - ds.size(), '0');
  std::string out = ds.substr(0, ds.size() - digits) + "." + ds.substr(ds.size() - digits);
  // trim trailing zeros but keep at least one decimal
  size_t last = out.find_last_not_of('0');
  if (out[last] == '.') ++last;
  out.erase(last + 1);
  return (neg ? "-" : "") + out;
}

namespace {

struct Cursor {
  std::string_view s;
  size_t i = 0;
  void skip() { while (i < s.size() && std::isspace((unsigned char)s[i])) ++i; }
  bool done() { skip(); return i >= s.size(); }
  char peek() { skip(); return i < s.size() ? s[i] : '\0'; }
  bool eat(char c) { skip(); if (i < s.size() && s[i] == c) { ++i; return true; } return false; }
  bool eat_word(std::string_view w) {
    skip();
    if (s.substr(i, w.size()) == w) { i += w.size(); return true; }
    return false;
  }
};

Int parse_int(Cursor& c) {
  c.skip();
  size_t start = c.i;
  if (c.i < c.s.size() && (c.s[c.i] == '+' || c.s[c.i] == '-')) ++c.i;
  size_t dstart = c.i;
  while (c.i < c.s.size() && std::isdigit((unsigned char)c.s[c.i])) ++c.i;
  if (c.i == dstart) throw ParseError("expected integer in '" + std::string(c.s) + "'");
  return Int(std::string(c.s.substr(start, c.i - start)));
}

// number := int [ '/' int ]
Rat parse_number(Cursor& c) {
  Int n = parse_int(c);
  if (c.eat('/')) {
    Int d = parse_int(c);
    if (d == 0) throw ParseError("zero denominator");
    return Rat(n, d);
  }
  return Rat(n);
}

}  // namespace

Rat parse_rat(std::string_view text) {
  Cursor c{text};
  Rat r = parse_number(c);
  if (!c.done()) throw ParseError("trailing characters in rational '" + std::string(text) + "'");
  return r;
}

Q2 operator+(const Q2& x, const Q2& y) { return Q2(x.a + y.a, x.b + y.b); }
Q2 operator-(const Q2& x, const Q2& y) { return Q2(x.a - y.a, x.b - y.b); }
Q2 operator-(const Q2& x) { return Q2(-x.a, -x.b); }

Q2 operator*(const Q2& x, const Q2& y) {
  return Q2(x.a * y.a + 2 * x.b * y.b, x.a * y.b + x.b * y.a);
}

Q2 operator/(const Q2& x, const Q2& y) {
  // (a+b s2) * (c-d s2) / (c^2 - 2 d^2); the norm vanishes only at 0
  Rat norm = y.a * y.a - 2 * y.b * y.b;
  if (norm == 0) throw DivisionByZero("division by zero in Q[sqrt2]");
  Q2 num = x * Q2(y.a, -y.b);
  return Q2(num.a / norm, num.b / norm);
}

int sign(const Q2& x) {
  int sa = sgn(x.a), sb = sgn(x.b);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: |a| vs |b|*sqrt2, squared exactly
  int cmp = (x.a * x.a < 2 * x.b * x.b) ? -1 : (x.a * x.a > 2 * x.b * x.b ? 1 : 0);
  if (cmp == 0) return 0;  // unreachable for rational a,b != 0, kept for safety
  return cmp > 0 ? sa : sb;
}

Q2 q2_abs(const Q2& x) { return sign(x) < 0 ? -x : x; }
Q2 q2_min(const Q2& x, const Q2& y) { return x <= y ? x : y; }
Q2 q2_max(const Q2& x, const Q2& y) { return x >= y ? x : y; }

double q2_to_double(const Q2& x) {
  return rat_to_double(x.a) + rat_to_double(x.b) * 1.41421356237309504880;
}

std::string q2_to_string(const Q2& x) {
  if (x.b == 0) return rat_to_string(x.a);
  std::string bs = rat_to_string(rat_abs(x.b)) + " sqrt2";
  if (x.a == 0) return (x.b < 0 ? "-" : "") + bs;
  return rat_to_string(x.a) + (x.b < 0 ? " - " : " + ") + bs;
}

Q2 parse_q2(std::string_view text) {
  Cursor c{text};
  Q2 out;
  bool first = true;
  while (!c.done()) {
    int s = 1;
    if (c.eat('-')) s = -1;
    else if (c.eat('+')) s = 1;
    else if (!first) throw ParseError("expected '+' or '-' in '" + std::string(text) + "'");
    Rat coeff(1);
    bool saw_number = false;
    c.skip();
    if (c.peek() != 's') {
      coeff = parse_number(c);
      saw_number = true;
    }
    c.eat('*');
    if (c.eat_word("sqrt2")) {
      out.b += s * coeff;
    } else if (saw_number) {
      out.a += s * coeff;
    } else {
      throw ParseError("expected number or sqrt2 in '" + std::string(text) + "'");
    }
    first = false;
  }
  if (first) throw ParseError("empty Q[sqrt2] literal");
  return out;
}

std::string q2_to_decimal(const Q2& x, int digits) {
  // decimal of a + b*sqrt2 via a rational enclosure of sqrt2 tight enough
  // for the requested digits, then rounding the midpoint
  // sqrt2 = 665857/470832 - eps with eps < 1e-12; refine by one Newton step
  Rat s(Int("665857"), Int("470832"));
  for (int i = 0; i < 3; ++i) s = (s + 2 / s) / 2;  // ~1e-48 accurate, above sqrt2
  return rat_to_decimal(x.a + x.b * s, digits);
}

}  // namespace eikjump
