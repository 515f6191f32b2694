#include "ncafem/geometry.hpp"

#include <algorithm>

namespace ncafem {

double diameter(const TriangleCoords &t) {
  return std::max({norm(t[1] - t[0]), norm(t[2] - t[1]), norm(t[0] - t[2])});
}

double inscribed_diameter(const TriangleCoords &t) {
  const double perimeter = norm(t[1] - t[0]) + norm(t[2] - t[1]) + norm(t[0] - t[2]);
  return 4.0 * std::abs(signed_area(t[0], t[1], t[2])) / perimeter;
}

bool point_on_segment(const Vec2 &p, const Vec2 &a, const Vec2 &b, double tol) {
  const Vec2 d = b - a;
  const double len = norm(d);
  if (len == 0.0) return norm(p - a) <= tol;
  if (std::abs(cross(d, p - a)) / len > tol) return false;
  const double s = dot(p - a, d) / (len * len);
  return s >= -tol / len && s <= 1.0 + tol / len;
}

bool point_in_polygon(const Vec2 &p, std::span<const Vec2> polygon, double tol) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (point_on_segment(p, polygon[i], polygon[(i + 1) % n], tol)) return true;
  }
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 &a = polygon[i];
    const Vec2 &b = polygon[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

} // namespace ncafem
