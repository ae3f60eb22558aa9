#include "compmap/geometry.hpp"

#include <algorithm>
#include <cstdio>

#include "compmap/errors.hpp"

namespace compmap {

ParseError::ParseError(std::size_t offset, std::vector<std::string> expected, const std::string& found)
    : Error([&] {
        std::string msg = "syntax error at offset " + std::to_string(offset) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
          if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
          msg += expected[i];
        }
        msg += ", found " + found;
        return msg;
      }()),
      offset_(offset),
      expected_(std::move(expected)) {}

Point2 canonical_direction(Point2 v) {
  const double n = norm(v);
  if (n == 0.0 || !std::isfinite(n)) return v;
  Point2 u{v.x / n, v.y / n};
  constexpr double kNegligible = 1e-12;
  if (u.x < -kNegligible || (std::abs(u.x) <= kNegligible && u.y < 0.0)) u = -u;
  return u;
}

void Rect::validate() const {
  if (std::isnan(x_lo) || std::isnan(x_hi) || std::isnan(y_lo) || std::isnan(y_hi)) {
    throw PreconditionError("rectangle bound is NaN");
  }
  if (!(x_lo <= x_hi) || !(y_lo <= y_hi)) {
    throw PreconditionError("rectangle requires x_lo <= x_hi and y_lo <= y_hi");
  }
}

double Rect::distance_to_boundary(Point2 p) const {
  return std::min({std::abs(p.x - x_lo), std::abs(x_hi - p.x), std::abs(p.y - y_lo), std::abs(y_hi - p.y)});
}

Rect Rect::clamped(const Rect& window) const {
  Rect r = *this;
  if (!std::isfinite(r.x_lo)) r.x_lo = window.x_lo;
  if (!std::isfinite(r.x_hi)) r.x_hi = window.x_hi;
  if (!std::isfinite(r.y_lo)) r.y_lo = window.y_lo;
  if (!std::isfinite(r.y_hi)) r.y_hi = window.y_hi;
  return r;
}

Rect intersect(const Rect& a, const Rect& b) {
  const Rect r{std::max(a.x_lo, b.x_lo), std::min(a.x_hi, b.x_hi), std::max(a.y_lo, b.y_lo),
               std::min(a.y_hi, b.y_hi)};
  if (!(r.x_lo <= r.x_hi && r.y_lo <= r.y_hi)) throw PreconditionError("rectangles do not intersect");
  return r;
}

double Matrix2::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

bool Matrix2::finite() const {
  return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
}

QuadrantMembership quadrant_membership(Point2 origin, Point2 p) {
  QuadrantMembership m;
  const double dx = p.x - origin.x;
  const double dy = p.y - origin.y;
  m.closed = {dx >= 0 && dy >= 0, dx <= 0 && dy >= 0, dx <= 0 && dy <= 0, dx >= 0 && dy <= 0};
  m.interior = {dx > 0 && dy > 0, dx < 0 && dy > 0, dx < 0 && dy < 0, dx > 0 && dy < 0};
  return m;
}

bool in_open_quadrant(Point2 origin, Point2 p, int quadrant, double margin) {
  const double dx = p.x - origin.x;
  const double dy = p.y - origin.y;
  auto pos = [margin](double d) { return margin > 0 ? d >= margin : d > 0; };
  auto neg = [margin](double d) { return margin > 0 ? d <= -margin : d < 0; };
  switch (quadrant) {
    case 1: return pos(dx) && pos(dy);
    case 2: return neg(dx) && pos(dy);
    case 3: return neg(dx) && neg(dy);
    case 4: return pos(dx) && neg(dy);
    default: throw PreconditionError("quadrant index must be 1..4");
  }
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace compmap
