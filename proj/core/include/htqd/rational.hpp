#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace htqd {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses "p" or "p/q" (q > 0 after normalization is enforced on output,
/// but "p/-q" is rejected outright). Throws errors::rational_parse on
/// anything else, including floating-point syntax.
Rational parse_rational(const std::string& text);

/// Lowest-terms form, "p/q" with q > 0, plain "p" when q == 1.
std::string rational_str(const Rational& r);

inline int sign_of(const Rational& r) { return r.sign(); }

struct Vec2 {
  Rational x;
  Rational y;

  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Vec2& o) const { return !(*this == o); }
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  bool is_zero() const { return x == 0 && y == 0; }
};

inline Vec2 operator*(const Rational& s, const Vec2& v) { return {s * v.x, s * v.y}; }

inline Rational cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline Rational dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

/// Strict lexicographic order, used only for deterministic tie-breaking.
inline bool lex_less(const Vec2& a, const Vec2& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

std::string vec_str(const Vec2& v);

struct Mat2 {
  Rational a, b, c, d;  // row-major [[a,b],[c,d]]

  static Mat2 identity() { return {1, 0, 0, 1}; }

  Rational det() const { return a * d - b * c; }
  Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
  Mat2 operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
  bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
  bool is_identity() const { return *this == identity(); }
  bool is_pm_identity() const { return is_identity() || (-*this).is_identity(); }
};

std::string mat_str(const Mat2& m);

}  // namespace htqd
