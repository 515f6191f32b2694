#include "ncafem/quad.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace ncafem;

namespace {

// exact integral of x^i y^j over the reference triangle: i! j! / (i + j + 2)!
double monomial_integral(int i, int j) {
  return std::tgamma(i + 1.0) * std::tgamma(j + 1.0) / std::tgamma(i + j + 3.0);
}

const TriangleCoords kRef{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};

} // namespace

TEST_CASE("degree 1 triangle rule is the centroid rule") {
  const TriRule &r = tri_rule(1);
  REQUIRE(r.weights.size() == 1);
  CHECK(r.weights[0] == doctest::Approx(0.5).epsilon(1e-15));
  for (double b : r.points[0]) CHECK(b == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("triangle rules: positive weights summing to 1/2, monomial exactness") {
  for (int d = 1; d <= kMaxRuleDegree; ++d) {
    CAPTURE(d);
    const TriRule &r = tri_rule(d);
    CHECK(r.degree >= d);
    for (double w : r.weights) CHECK(w > 0.0);
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    for (const auto &b : r.points) {
      for (double c : b) CHECK(c >= -1e-15);
      CHECK(b[0] + b[1] + b[2] == doctest::Approx(1.0).epsilon(1e-14));
    }
    for (int i = 0; i <= d; ++i)
      for (int j = 0; i + j <= d; ++j) {
        const double q = integrate(r, kRef, [&](const Vec2 &p) { return std::pow(p.x, i) * std::pow(p.y, j); });
        CHECK(q == doctest::Approx(monomial_integral(i, j)).epsilon(1e-13));
      }
  }
}

TEST_CASE("x^2 y^3 over the reference triangle") {
  // sympy: integrate(x**2*y**3, (y, 0, 1 - x), (x, 0, 1)) = 1/420
  const double q = integrate(tri_rule(5), kRef, [](const Vec2 &p) { return p.x * p.x * p.y * p.y * p.y; });
  CHECK(q == doctest::Approx(1.0 / 420.0).epsilon(1e-14));
}

TEST_CASE("random polynomials on random triangles") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int deg = 1 + trial % kMaxRuleDegree;
    TriangleCoords t{Vec2{d(rng), d(rng)}, Vec2{d(rng), d(rng)}, Vec2{d(rng), d(rng)}};
    if (std::abs(signed_area(t[0], t[1], t[2])) < 0.1) continue;
    // a random monomial in affine coordinates of t integrates like its reference counterpart
    const int i = trial % (deg + 1), j = deg - i;
    const Vec2 e1 = t[1] - t[0], e2 = t[2] - t[0];
    const double det = cross(e1, e2);
    auto ref = [&](const Vec2 &p) {
      const Vec2 q = p - t[0];
      return Vec2{cross(q, e2) / det, cross(e1, q) / det};
    };
    const double q = integrate(tri_rule(deg), t, [&](const Vec2 &p) {
      const Vec2 s = ref(p);
      return std::pow(s.x, i) * std::pow(s.y, j);
    });
    CHECK(q == doctest::Approx(std::abs(det) * monomial_integral(i, j)).epsilon(1e-12));
  }
}

TEST_CASE("edge rules") {
  const EdgeRule &m = edge_rule(1);
  REQUIRE(m.points.size() == 1);
  CHECK(m.points[0] == doctest::Approx(0.5));
  CHECK(m.weights[0] == doctest::Approx(1.0));
  for (int d = 1; d <= kMaxRuleDegree; ++d) {
    const EdgeRule &r = edge_rule(d);
    for (double w : r.weights) CHECK(w > 0.0);
    CHECK(std::accumulate(r.weights.begin(), r.weights.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    for (int k = 0; k <= d; ++k) {
      double s = 0.0;
      for (std::size_t q = 0; q < r.points.size(); ++q) s += r.weights[q] * std::pow(r.points[q], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
    }
  }
  const EdgeRule &r5 = edge_rule(5);
  double s = 0.0;
  for (std::size_t q = 0; q < r5.points.size(); ++q) s += r5.weights[q] * std::pow(r5.points[q], 4);
  CHECK(s == doctest::Approx(0.2).epsilon(1e-15));
  const double len = integrate(r5, Vec2{0, 0}, Vec2{3, 4}, [](const Vec2 &) { return 1.0; });
  CHECK(len == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("unsupported degrees") {
  CHECK_THROWS_AS(tri_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(tri_rule(11), std::invalid_argument);
  CHECK_THROWS_AS(edge_rule(0), std::invalid_argument);
  CHECK_THROWS_AS(edge_rule(11), std::invalid_argument);
}

TEST_CASE("graded integration of smooth integrands matches the plain rule") {
  const TriangleCoords t{Vec2{0.2, -0.1}, Vec2{1.3, 0.4}, Vec2{-0.3, 0.9}};
  auto f = [](const Vec2 &p) { return 1.0 + p.x * p.x * p.y - 3.0 * p.y * p.y * p.y * p.x + p.x; };
  const double plain = integrate(tri_rule(6), t, f);
  for (int singular = 0; singular < 3; ++singular)
    for (int levels : {0, 1, 5, 14}) {
      CAPTURE(levels);
      CHECK(graded_tri_integrate(f, t, singular, levels, 6) == doctest::Approx(plain).epsilon(1e-13));
      const double area = graded_tri_integrate([](const Vec2 &) { return 1.0; }, t, singular, levels, 2);
      CHECK(area == doctest::Approx(std::abs(signed_area(t[0], t[1], t[2]))).epsilon(1e-13));
    }
  CHECK_THROWS_AS(graded_tri_integrate(f, t, 3, 2, 4), std::invalid_argument);
}

TEST_CASE("graded integration of r^-1.8 self-converges") {
  auto f = [](const Vec2 &p) { return std::pow(p.x * p.x + p.y * p.y, -0.9); };
  const double l12 = graded_tri_integrate(f, kRef, 0, 12, 10);
  const double l16 = graded_tri_integrate(f, kRef, 0, 16, 10);
  CHECK(std::abs(l12 - l16) / l16 < 1e-6);

  // polar reduction: int_0^{pi/2} R(t)^0.2 / 0.2 dt with R(t) = 1 / (cos t + sin t), smooth in t
  const EdgeRule g = gauss_legendre(60);
  double exact = 0.0;
  for (std::size_t q = 0; q < g.points.size(); ++q) {
    const double t = 0.5 * std::acos(-1.0) * g.points[q];
    exact += g.weights[q] * std::pow(std::cos(t) + std::sin(t), -0.2) / 0.2;
  }
  exact *= 0.5 * std::acos(-1.0);
  CHECK(std::abs(l16 - exact) / exact < 1e-6);
}
