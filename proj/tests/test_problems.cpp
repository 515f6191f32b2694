#include "test_support.hpp"

#include <doctest.h>

using namespace testing;

namespace {

constexpr double pi = std::numbers::pi;

Vec2 fd_gradient(const std::function<double(const Vec2 &)> &u, const Vec2 &p, double h = 1e-6) {
  return {(u(p + Vec2{h, 0}) - u(p - Vec2{h, 0})) / (2 * h), (u(p + Vec2{0, h}) - u(p - Vec2{0, h})) / (2 * h)};
}

int subdomain_at(const ProblemSpec &spec, const Vec2 &p) {
  for (const auto &s : spec.subdomains)
    if (point_in_polygon(p, s.polygon)) return s.id;
  return -1;
}

// [u] and [alpha du/dn] across the ray at angle t, sampled at radii in (0, 1).
void check_interface(const ProblemSpec &spec, double t) {
  const ExactSolution &ex = *spec.exact;
  const Vec2 dir{std::cos(t), std::sin(t)};
  const Vec2 n{-dir.y, dir.x};
  for (double r : {0.01, 0.2, 0.5, 0.9}) {
    CAPTURE(t);
    CAPTURE(r);
    const Vec2 p = r * dir;
    const Vec2 lo = p - 1e-3 * n, hi = p + 1e-3 * n;
    const double a_lo = spec.alpha(subdomain_at(spec, lo)), a_hi = spec.alpha(subdomain_at(spec, hi));
    const double u_lo = ex.value(p, lo), u_hi = ex.value(p, hi);
    CHECK(std::abs(u_lo - u_hi) <= 1e-8 * std::max(1.0, std::abs(u_lo)));
    const double f_lo = a_lo * dot(ex.gradient(p, lo), n), f_hi = a_hi * dot(ex.gradient(p, hi), n);
    CHECK(std::abs(f_lo - f_hi) <= 1e-8 * std::max(1.0, std::abs(f_lo)));
  }
}

} // namespace

TEST_CASE("kellogg coefficients and data") {
  const ProblemSpec k = kellogg_problem();
  CHECK(k.alpha(subdomain_at(k, {0.5, 0.5})) == 161.4476387975881);
  CHECK(k.alpha(subdomain_at(k, {-0.5, 0.5})) == 1.0);
  CHECK(k.alpha(subdomain_at(k, {-0.5, -0.5})) == 161.4476387975881);
  CHECK(k.alpha(subdomain_at(k, {0.5, -0.5})) == 1.0);
  CHECK(k.f_is_zero);
  REQUIRE(k.exact);
  CHECK((*k.exact)({0, 0}) == 0.0);
  REQUIRE(k.singular_points.size() == 1);
  CHECK(k.singular_points[0] == Vec2{0, 0});
  for (const auto &s : k.boundary_segments) CHECK(s.tag == BoundaryTag::dirichlet);
  const Mesh m = k.build_initial_mesh();
  CHECK(check_invariants(m).empty());
  CHECK(m.total_area() == doctest::Approx(4.0));
}

TEST_CASE("kellogg angular factor is continuous with continuous flux") {
  const double R = kKelloggR;
  const std::array<double, 4> alpha{R, 1.0, R, 1.0};
  for (int i = 1; i <= 3; ++i) {
    const double t = i * pi / 2;
    CAPTURE(i);
    CHECK(std::abs(kellogg_mu(t, i - 1) - kellogg_mu(t, i)) < 1e-10);
    const double lo = alpha[i - 1] * kellogg_dmu(t, i - 1), hi = alpha[i] * kellogg_dmu(t, i);
    CHECK(std::abs(lo - hi) <= 1e-8 * std::abs(lo));
  }
  // periodic closure at theta = 0 = 2 pi
  CHECK(std::abs(kellogg_mu(2 * pi, 3) - kellogg_mu(0.0, 0)) < 1e-10);
  const double lo = alpha[3] * kellogg_dmu(2 * pi, 3), hi = alpha[0] * kellogg_dmu(0.0, 0);
  CHECK(std::abs(lo - hi) <= 1e-8 * std::abs(lo));
}

TEST_CASE("benchmark solutions satisfy the interface conditions") {
  const ProblemSpec k = kellogg_problem();
  for (int i = 0; i < 4; ++i) check_interface(k, i * pi / 2);
  const ProblemSpec l = lshape_problem();
  check_interface(l, pi / 2);
  check_interface(l, pi);
}

TEST_CASE("kellogg gradient matches finite differences away from interfaces") {
  const ProblemSpec k = kellogg_problem();
  const ExactSolution &ex = *k.exact;
  for (const Vec2 p : {Vec2{0.3, 0.4}, Vec2{-0.7, 0.2}, Vec2{-0.1, -0.6}, Vec2{0.8, -0.3}}) {
    const Vec2 fd = fd_gradient([&](const Vec2 &q) { return ex(q); }, p);
    const Vec2 g = ex.grad(p);
    CHECK(norm(fd - g) <= 1e-6 * norm(g));
  }
}

TEST_CASE("lshape data") {
  const ProblemSpec l = lshape_problem();
  REQUIRE(l.exact);
  const ExactSolution &ex = *l.exact;
  CHECK(std::abs(ex({-1, 0})) < 1e-15);
  for (double r : {0.1, 0.5, 1.0}) CHECK(std::abs(ex({-r, 0})) < 1e-15);
  // theta is measured in [0, 3 pi / 2]; the ray x = 0, y < 0 is theta = 3 pi / 2
  CHECK(ex({0, -1}) == doctest::Approx(std::sin(4 * pi / 3)).epsilon(1e-14));
  CHECK(ex({1, 0}) == doctest::Approx(std::sin(pi / 3)).epsilon(1e-14));
  const Vec2 p{0.3, 0.4};
  const Vec2 fd = fd_gradient([&](const Vec2 &q) { return ex(q); }, p);
  CHECK(norm(fd - ex.grad(p)) <= 1e-6 * norm(ex.grad(p)));
  CHECK(l.alpha(1) == 1.0);
  const Mesh m = l.build_initial_mesh();
  CHECK(check_invariants(m).empty());
  CHECK(m.total_area() == doctest::Approx(3.0));
  for (const auto &e : m.edges())
    if (e.boundary()) CHECK(e.tag == BoundaryTag::dirichlet);
  CHECK(l.g_dirichlet({0.5, 1.0}) == ex({0.5, 1.0}));
}

TEST_CASE("energy norm of the exact solution") {
  SUBCASE("u = x on the unit square") {
    const ProblemSpec s =
        manufactured(grid(2), [](const Vec2 &p) { return p.x; }, [](const Vec2 &) { return Vec2{1, 0}; });
    const EnergyNormEstimate e = energy_norm_of_exact(s, 2);
    CHECK(e.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(e.self_convergence < 1e-13);
  }
  SUBCASE("benchmarks reproduce the stored constants") {
    for (const ProblemSpec &s : {kellogg_problem(), lshape_problem()}) {
      CAPTURE(s.name);
      const EnergyNormEstimate e = energy_norm_of_exact(s, 4);
      CHECK(e.self_convergence < 1e-5);
      CHECK(std::abs(e.value - s.exact->energy_norm) / s.exact->energy_norm < 1e-6);
    }
  }
  SUBCASE("missing exact solution") {
    ProblemSpec s = manufactured(grid(1), [](const Vec2 &) { return 0.0; }, [](const Vec2 &) { return Vec2{}; });
    s.exact.reset();
    CHECK_THROWS_AS(energy_norm_of_exact(s, 1), ProblemError);
  }
}

TEST_CASE("problem files") {
  const nlohmann::json cfg = nlohmann::json::parse(R"({
    "name": "square",
    "subdomains": [{"id": 1, "alpha": 2.0, "label": "all",
                    "polygon": [[0, 0], [1, 0], [1, 1], [0, 1]], "f": [[4.0, 0, 0]]}],
    "boundary": [{"from": [0, 0], "to": [1, 0], "type": "D", "g": [[1.0, 1, 0]]},
                 {"from": [1, 0], "to": [1, 1], "type": "N", "g": 0.5},
                 {"from": [1, 1], "to": [0, 1], "type": "D"},
                 {"from": [0, 1], "to": [0, 0], "type": "D"}],
    "mesh_text": "mesh 2d v4 t2 e4\n0 0\n1 0\n1 1\n0 1\n0 1 3 1\n2 3 1 1\n0 1 D\n1 2 N\n2 3 D\n3 0 D\n"
  })");
  const ProblemSpec s = parse_problem(cfg, ".");
  CHECK(s.alpha(1) == 2.0);
  CHECK(s.f({0.3, 0.3}, 1) == 4.0);
  CHECK(s.g_dirichlet({0.25, 0.0}) == doctest::Approx(0.25));
  CHECK(s.g_dirichlet({0.0, 0.5}) == 0.0);
  CHECK(s.g_neumann({1.0, 0.5}) == 0.5);
  CHECK_FALSE(s.exact);
  const Mesh m = s.build_initial_mesh();
  CHECK(m.num_elements() == 2);
  int neumann = 0;
  for (const auto &e : m.edges()) neumann += e.tag == BoundaryTag::neumann;
  CHECK(neumann == 1);
  const nlohmann::json d = describe_problem(s);
  CHECK(d["boundary_partition"] == "mixed");

  nlohmann::json bad = cfg;
  bad["subdomains"][0]["alpha"] = -1.0;
  CHECK_THROWS_AS(parse_problem(bad, "."), ProblemError);
  bad = cfg;
  for (auto &b : bad["boundary"]) b["type"] = "N";
  CHECK_THROWS_AS(parse_problem(bad, "."), ProblemError);
  bad = cfg;
  bad.erase("mesh_text");
  CHECK_THROWS_AS(parse_problem(bad, "."), ProblemError);
  CHECK_THROWS_AS(load_problem_file("/nonexistent/problem.json"), ProblemError);
}

TEST_CASE("kellogg_problem is deterministic") {
  const ProblemSpec a = kellogg_problem(), b = kellogg_problem();
  for (const Vec2 p : {Vec2{0.1, 0.2}, Vec2{-0.9, 0.9}, Vec2{0.0, -0.5}}) CHECK((*a.exact)(p) == (*b.exact)(p));
  CHECK(describe_problem(a) == describe_problem(b));
}
