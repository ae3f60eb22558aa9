#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace compmap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Point2() = default;
  constexpr Point2(double x_, double y_) : x(x_), y(y_) {}

  bool finite() const { return std::isfinite(x) && std::isfinite(y); }

  constexpr Point2& operator+=(Point2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Point2& operator-=(Point2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator-(Point2 a) { return {-a.x, -a.y}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

/// Unit vector in the direction of v, sign-normalized so that the first
/// component that is not negligible is positive.
Point2 canonical_direction(Point2 v);

/// Cartesian product of two intervals; ends may be infinite.
struct Rect {
  double x_lo = -kInf;
  double x_hi = kInf;
  double y_lo = -kInf;
  double y_hi = kInf;

  static Rect whole_plane() { return {}; }
  static Rect first_quadrant() { return {0.0, kInf, 0.0, kInf}; }

  /// Throws PreconditionError unless lo <= hi on both axes and no bound is NaN.
  void validate() const;

  bool bounded() const {
    return std::isfinite(x_lo) && std::isfinite(x_hi) && std::isfinite(y_lo) && std::isfinite(y_hi);
  }
  bool contains(Point2 p) const { return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi; }
  bool contains_interior(Point2 p) const { return p.x > x_lo && p.x < x_hi && p.y > y_lo && p.y < y_hi; }
  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
  double diagonal() const { return std::hypot(width(), height()); }

  /// Distance from p (assumed inside) to the nearest edge of the rectangle.
  double distance_to_boundary(Point2 p) const;

  /// Replace infinite ends by the matching ends of `window`.
  Rect clamped(const Rect& window) const;

  friend bool operator==(const Rect&, const Rect&) = default;
};

/// Intersection of two rectangles; throws PreconditionError when empty.
Rect intersect(const Rect& a, const Rect& b);

/// Default window used when sampling unbounded rectangles.
inline constexpr Rect kDefaultSamplingWindow{0.0, 50.0, 0.0, 50.0};

/// Row-major 2x2 matrix.
struct Matrix2 {
  double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

  static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

  double trace() const { return a11 + a22; }
  double det() const { return a11 * a22 - a12 * a21; }
  double max_abs() const;
  double frobenius() const { return std::sqrt(a11 * a11 + a12 * a12 + a21 * a21 + a22 * a22); }
  bool finite() const;

  Point2 operator*(Point2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
            a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
  }
  friend Matrix2 operator-(const Matrix2& a, const Matrix2& b) {
    return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
  }
};

/// South-east order: p <=_se q iff p.x <= q.x and p.y >= q.y.
inline bool le_se(Point2 p, Point2 q) { return p.x <= q.x && p.y >= q.y; }
/// North-east (componentwise) order: p <=_ne q iff p.x <= q.x and p.y <= q.y.
inline bool le_ne(Point2 p, Point2 q) { return p.x <= q.x && p.y <= q.y; }

/// Closed-quadrant membership of a point relative to an origin, with flags for
/// the open quadrants. Index 0 is quadrant 1.
struct QuadrantMembership {
  std::array<bool, 4> closed{};
  std::array<bool, 4> interior{};

  bool in(int quadrant) const { return closed.at(quadrant - 1); }
  bool in_interior(int quadrant) const { return interior.at(quadrant - 1); }
};

QuadrantMembership quadrant_membership(Point2 origin, Point2 p);

/// True when p lies in the open quadrant `quadrant` of `origin` with both
/// strict inequalities cleared by at least `margin`.
bool in_open_quadrant(Point2 origin, Point2 p, int quadrant, double margin = 0.0);

/// "%.17g" formatting, the lossless textual form used by every output file.
std::string format_real(double v);

}  // namespace compmap
