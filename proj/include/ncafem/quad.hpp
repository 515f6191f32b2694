#pragma once

#include "ncafem/geometry.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ncafem {

/// Quadrature on the reference triangle {x, y >= 0, x + y <= 1}; weights sum to 1/2.
struct TriRule {
  std::vector<std::array<double, 3>> points; ///< barycentric coordinates
  std::vector<double> weights;
  int degree = 0;
};

/// Quadrature on [0, 1]; weights sum to 1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int degree = 0;
};

inline constexpr int kMaxRuleDegree = 10;

/// Exact for total degree <= degree, 1 <= degree <= 10.  Returned rules are cached.
const TriRule &tri_rule(int degree);
const EdgeRule &edge_rule(int degree);

/// Gauss-Legendre nodes and weights on [0, 1].
EdgeRule gauss_legendre(int npoints);

/// Collapsed rule for the corner cell at the singular vertex (see graded_tri_integrate).
struct CornerRule {
  std::vector<double> u, v, weights; ///< weights include the Duffy and grading Jacobians
};
const CornerRule &corner_rule(int degree);

// Default degrees per integrand family.
inline constexpr int kStiffnessDegree = 2;
inline constexpr int kLoadDegree = 4;
inline constexpr int kErrorDegree = 10;
inline constexpr int kDefaultGradingLevels = 14;

template <class F>
double integrate(const TriRule &rule, const TriangleCoords &t, F &&f) {
  const double jac = 2.0 * std::abs(signed_area(t[0], t[1], t[2]));
  double s = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const auto &b = rule.points[q];
    const Vec2 x = b[0] * t[0] + b[1] * t[1] + b[2] * t[2];
    s += rule.weights[q] * f(x);
  }
  return jac * s;
}

template <class F>
double integrate(const EdgeRule &rule, const Vec2 &a, const Vec2 &b, F &&f) {
  const Vec2 d = b - a;
  double s = 0.0;
  for (std::size_t q = 0; q < rule.weights.size(); ++q) s += rule.weights[q] * f(a + rule.points[q] * d);
  return norm(d) * s;
}

/// Base rule applied on the four red children of t.
template <class F>
double integrate_red(const TriRule &rule, const TriangleCoords &t, F &&f) {
  const Vec2 m01 = midpoint(t[0], t[1]), m12 = midpoint(t[1], t[2]), m20 = midpoint(t[2], t[0]);
  return integrate(rule, {t[0], m01, m20}, f) + integrate(rule, {m01, t[1], m12}, f) +
         integrate(rule, {m20, m12, t[2]}, f) + integrate(rule, {m12, m20, m01}, f);
}

/// Integrates f over a triangle with a point singularity at vertex `singular`.
///
/// Each level cuts off the far part of the current cell (the trapezoid between
/// the cell and its half-size copy at the singular vertex) and integrates its two
/// triangles with the base rule on their red children.  The remaining corner cell is integrated with a collapsed
/// (Duffy) product rule whose radial variable is graded as s = w^10, which
/// turns r^a singularities with a > -2 into smooth integrands.  The corner rule is
/// exact for polynomials of the base degree, so smooth integrands are unaffected.
template <class F>
double graded_tri_integrate(F &&f, const TriangleCoords &tri, int singular, int levels, int degree) {
  if (singular < 0 || singular > 2) throw std::invalid_argument("singular vertex index out of range");
  const TriRule &base = tri_rule(degree);
  Vec2 s = tri[singular];
  Vec2 b = tri[(singular + 1) % 3];
  Vec2 c = tri[(singular + 2) % 3];
  double sum = 0.0;
  for (int level = 0; level < levels; ++level) {
    const Vec2 mb = midpoint(s, b);
    const Vec2 mc = midpoint(s, c);
    sum += integrate_red(base, {mb, b, c}, f);
    sum += integrate_red(base, {mb, c, mc}, f);
    b = mb;
    c = mc;
  }
  const CornerRule &corner = corner_rule(degree);
  const double jac = 2.0 * std::abs(signed_area(s, b, c));
  const Vec2 sb = b - s;
  const Vec2 bc = c - b;
  double cell = 0.0;
  for (std::size_t q = 0; q < corner.weights.size(); ++q) {
    const Vec2 x = s + corner.u[q] * (sb + corner.v[q] * bc);
    cell += corner.weights[q] * f(x);
  }
  return sum + jac * cell;
}

} // namespace ncafem
