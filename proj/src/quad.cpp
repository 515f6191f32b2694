#include "ncafem/quad.hpp"

#include <mutex>
#include <numbers>
#include <string>

namespace ncafem {

namespace {

constexpr int kGradingPower = 10;
constexpr int kCornerAngularPoints = 20;

void check_degree(int degree) {
  if (degree < 1 || degree > kMaxRuleDegree)
    throw std::invalid_argument("unsupported quadrature degree " + std::to_string(degree));
}

TriRule make_tri_rule(int degree) {
  TriRule r;
  r.degree = degree;
  if (degree == 1) {
    r.points = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
    r.weights = {0.5};
    return r;
  }
  if (degree == 2) {
    const double a = 2.0 / 3.0, b = 1.0 / 6.0;
    r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
    r.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
    return r;
  }
  // Conical product: x = u, y = v (1 - u), Jacobian (1 - u) adds one degree in u.
  const EdgeRule gu = gauss_legendre((degree + 2 + 1) / 2);
  const EdgeRule gv = gauss_legendre((degree + 1 + 1) / 2);
  for (std::size_t i = 0; i < gu.points.size(); ++i) {
    for (std::size_t j = 0; j < gv.points.size(); ++j) {
      const double x = gu.points[i];
      const double y = gv.points[j] * (1.0 - x);
      r.points.push_back({1.0 - x - y, x, y});
      r.weights.push_back(gu.weights[i] * gv.weights[j] * (1.0 - x));
    }
  }
  return r;
}

CornerRule make_corner_rule(int degree) {
  // u = w^p, du = p w^(p-1) dw; a degree-d polynomial contributes u^(d+1) du,
  // i.e. degree p (d + 2) - 1 in w.
  const EdgeRule gw = gauss_legendre(kGradingPower * (degree + 2) / 2);
  // the angular factor of r^a integrands is smooth but not polynomial
  const EdgeRule gv = gauss_legendre(std::max((degree + 2) / 2, kCornerAngularPoints));
  CornerRule r;
  for (std::size_t i = 0; i < gw.points.size(); ++i) {
    const double w = gw.points[i];
    const double u = std::pow(w, kGradingPower);
    const double jac = u * kGradingPower * std::pow(w, kGradingPower - 1);
    for (std::size_t j = 0; j < gv.points.size(); ++j) {
      r.u.push_back(u);
      r.v.push_back(gv.points[j]);
      r.weights.push_back(gw.weights[i] * gv.weights[j] * jac);
    }
  }
  return r;
}

} // namespace

EdgeRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("Gauss-Legendre needs at least one point");
  // P_n(x) and P_n'(x) by the three-term recurrence
  auto legendre = [n](double x, double &dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  EdgeRule r;
  r.degree = 2 * n - 1;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.points[i] = 0.5 * (1.0 - x);
    r.points[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

const TriRule &tri_rule(int degree) {
  check_degree(degree);
  static const std::array<TriRule, kMaxRuleDegree + 1> rules = [] {
    std::array<TriRule, kMaxRuleDegree + 1> out;
    for (int d = 1; d <= kMaxRuleDegree; ++d) out[d] = make_tri_rule(d);
    return out;
  }();
  return rules[degree];
}

const EdgeRule &edge_rule(int degree) {
  check_degree(degree);
  static const std::array<EdgeRule, kMaxRuleDegree + 1> rules = [] {
    std::array<EdgeRule, kMaxRuleDegree + 1> out;
    for (int d = 1; d <= kMaxRuleDegree; ++d) {
      out[d] = gauss_legendre((d + 2) / 2);
      out[d].degree = d;
    }
    return out;
  }();
  return rules[degree];
}

const CornerRule &corner_rule(int degree) {
  check_degree(degree);
  static const std::array<CornerRule, kMaxRuleDegree + 1> rules = [] {
    std::array<CornerRule, kMaxRuleDegree + 1> out;
    for (int d = 1; d <= kMaxRuleDegree; ++d) out[d] = make_corner_rule(d);
    return out;
  }();
  return rules[degree];
}

} // namespace ncafem
