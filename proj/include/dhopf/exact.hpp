#pragma once

// Exact rational geometry kernel: points with rational coordinates and
// sign-exact orientation / in-circle predicates. Predicates are filtered
// through a double-precision evaluation with a conservative error bound and
// fall back to GMP rationals only when the filter cannot decide.

#include <gmpxx.h>

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace dhopf {

using Rational = mpq_class;

/// Parses an integer, decimal ("-1.25", "3e-2") or fraction ("2/3") literal
/// without rounding. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// "p" or "p/q" in lowest terms.
std::string to_string(const Rational& value);

std::size_t hash_value(const Rational& value);

/// Exact double -> rational conversion (every finite double is a dyadic rational).
Rational from_double(double value);

struct Point2 {
  Rational x, y;
  double ax = 0.0, ay = 0.0;  // cached approximations for filtering

  Point2() = default;
  Point2(Rational x_, Rational y_);

  friend bool operator==(const Point2& p, const Point2& q) { return p.x == q.x && p.y == q.y; }
  friend bool operator!=(const Point2& p, const Point2& q) { return !(p == q); }
  /// Lexicographic (x, then y).
  friend bool operator<(const Point2& p, const Point2& q) {
    const int c = cmp(p.x, q.x);
    return c < 0 || (c == 0 && p.y < q.y);
  }
};

struct Point3 {
  Rational x, y, z;
  double ax = 0.0, ay = 0.0, az = 0.0;

  Point3() = default;
  Point3(Rational x_, Rational y_, Rational z_);

  std::array<double, 3> approx() const { return {ax, ay, az}; }

  friend bool operator==(const Point3& p, const Point3& q) {
    return p.x == q.x && p.y == q.y && p.z == q.z;
  }
  friend bool operator!=(const Point3& p, const Point3& q) { return !(p == q); }
  friend bool operator<(const Point3& p, const Point3& q) {
    int c = cmp(p.x, q.x);
    if (c != 0) return c < 0;
    c = cmp(p.y, q.y);
    if (c != 0) return c < 0;
    return p.z < q.z;
  }
};

struct Point2Hash {
  std::size_t operator()(const Point2& p) const;
};
struct Point3Hash {
  std::size_t operator()(const Point3& p) const;
};

/// Sign of det[b - a, c - a]: +1 when (a, b, c) turns counter-clockwise.
int orient2d(const Point2& a, const Point2& b, const Point2& c);
/// Exact value of det[b - a, c - a] (twice the signed area).
Rational orient2d_value(const Point2& a, const Point2& b, const Point2& c);

/// Sign of det[b - a, c - a, d - a]. Positive when d lies on the side of the
/// plane (a, b, c) that the right-hand normal (b - a) x (c - a) points to.
int orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// +1 if d lies strictly inside the circumcircle of the counter-clockwise
/// triangle (a, b, c), -1 if strictly outside, 0 if cocircular.
int incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

/// Closed point-in-triangle test (boundary counts as inside). The triangle may
/// have either orientation but must be nondegenerate.
bool in_closed_triangle(const Point2& p, const Point2& a, const Point2& b, const Point2& c);

/// Barycentric coordinates of p with respect to the nondegenerate triangle (a, b, c).
std::array<Rational, 3> barycentric(const Point2& p, const Point2& a, const Point2& b,
                                    const Point2& c);

Point3 affine_combination(const std::array<Rational, 3>& weights, const Point3& a,
                          const Point3& b, const Point3& c);
Point2 affine_combination(const std::array<Rational, 3>& weights, const Point2& a,
                          const Point2& b, const Point2& c);

/// Exact cross product (b - a) x (c - a).
std::array<Rational, 3> cross(const Point3& a, const Point3& b, const Point3& c);

inline void hash_combine(std::size_t& seed, std::size_t value) {
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace dhopf
