#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace ncafem {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 &operator+=(const Vec2 &o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2 &operator-=(const Vec2 &o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2 &operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  friend constexpr bool operator==(const Vec2 &, const Vec2 &) = default;
};

constexpr Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
constexpr Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
constexpr Vec2 operator-(const Vec2 &a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return a *= s; }
constexpr Vec2 operator*(Vec2 a, double s) { return a *= s; }

constexpr double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }

// Arithmetic mean of the endpoints; bit-reproducible.
constexpr Vec2 midpoint(const Vec2 &a, const Vec2 &b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

/// Signed area, positive for counter-clockwise vertex order.
constexpr double signed_area(const Vec2 &a, const Vec2 &b, const Vec2 &c) {
  return 0.5 * cross(b - a, c - a);
}

using TriangleCoords = std::array<Vec2, 3>;

/// Diameter (longest edge) of a triangle.
double diameter(const TriangleCoords &t);

/// Diameter of the inscribed circle.
double inscribed_diameter(const TriangleCoords &t);

/// Point inside or on a simple polygon, within an absolute tolerance.
bool point_in_polygon(const Vec2 &p, std::span<const Vec2> polygon, double tol = 1e-12);

/// Point on the closed segment [a, b], within an absolute tolerance.
bool point_on_segment(const Vec2 &p, const Vec2 &a, const Vec2 &b, double tol = 1e-12);

} // namespace ncafem
