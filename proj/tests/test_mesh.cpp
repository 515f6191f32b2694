#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

using namespace testing;

namespace {

int interior_edges(const Mesh &m) {
  int n = 0;
  for (const auto &e : m.edges()) n += !e.boundary();
  return n;
}

void check_orientation(const Mesh &m) {
  for (int e = 0; e < m.num_edges(); ++e) {
    const Edge &ed = m.edge(e);
    if (ed.boundary()) continue;
    const double ap = m.alpha(ed.plus), am = m.alpha(ed.minus);
    REQUIRE(ap >= am);
    if (ap == am) REQUIRE(ed.plus < ed.minus);
  }
}

// Perturbed grid refined at random: a cheap source of irregular meshes.
Mesh random_mesh(std::mt19937_64 &rng) {
  MeshInput in = grid(4);
  std::uniform_real_distribution<double> d(-0.08, 0.08);
  for (auto &v : in.vertices)
    if (v.x > 0 && v.x < 1 && v.y > 0 && v.y < 1) v += Vec2{d(rng), d(rng)};
  Mesh m = build_mesh(in);
  std::uniform_int_distribution<int> coin(0, 3);
  for (int round = 0; round < 4; ++round) {
    std::vector<int> marked;
    for (int k = 0; k < m.num_elements(); ++k)
      if (coin(rng) == 0) marked.push_back(k);
    m = bisect(m, marked);
  }
  return m;
}

} // namespace

TEST_CASE("two-triangle square has 5 edges and one interior edge") {
  const Mesh m = build_mesh(two_triangle_square());
  CHECK(m.num_elements() == 2);
  CHECK(m.num_edges() == 5);
  CHECK(interior_edges(m) == 1);
  CHECK(check_invariants(m).empty());
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("build_mesh rejects invalid input") {
  SUBCASE("repeated vertex") {
    MeshInput in = two_triangle_square();
    in.triangles[0].v = {0, 1, 1};
    CHECK_THROWS_WITH_AS(build_mesh(in), doctest::Contains("degenerate element"), MeshError);
  }
  SUBCASE("zero area") {
    MeshInput in = two_triangle_square();
    in.vertices.push_back({2, 2});
    in.triangles.push_back({{0, 2, 4}, 1});
    CHECK_THROWS_WITH_AS(build_mesh(in), doctest::Contains("zero-area"), MeshError);
  }
  SUBCASE("hanging node") {
    MeshInput in;
    in.vertices = {{0, 0}, {2, 0}, {0, 2}, {1, 1}, {2, 2}};
    in.triangles = {{{0, 1, 2}, 1}, {{1, 4, 3}, 1}, {{3, 4, 2}, 1}};
    in.tagger = [](const Vec2 &, const Vec2 &) { return BoundaryTag::dirichlet; };
    in.alpha = {{1, 1.0}};
    CHECK_THROWS_WITH_AS(build_mesh(in), doctest::Contains("non-conforming"), MeshError);
  }
  SUBCASE("untagged boundary") {
    MeshInput in = two_triangle_square();
    in.tagger = [](const Vec2 &a, const Vec2 &b) {
      return a.y == 0 && b.y == 0 ? BoundaryTag::interior : BoundaryTag::dirichlet;
    };
    CHECK_THROWS_WITH_AS(build_mesh(in), doctest::Contains("untagged boundary edge"), MeshError);
  }
  SUBCASE("interface cutting an element") {
    MeshInput in = two_triangle_square();
    in.alpha = {{1, 1.0}, {2, 5.0}};
    in.triangles[1].subdomain = 2;
    in.subdomain_polygons[1] = {{0, 0}, {0.5, 0}, {0.5, 1}, {0, 1}};
    in.subdomain_polygons[2] = {{0.5, 0}, {1, 0}, {1, 1}, {0.5, 1}};
    CHECK_THROWS_WITH_AS(build_mesh(in), doctest::Contains("interface cuts element"), MeshError);
  }
  SUBCASE("missing coefficient") {
    MeshInput in = two_triangle_square();
    in.alpha.clear();
    CHECK_THROWS_AS(build_mesh(in), MeshError);
  }
}

TEST_CASE("checkerboard criss-cross orientation puts the R side first") {
  const double R = 100.0;
  const Mesh m = build_mesh(criss_cross({R, 1, R, 1}));
  int center = -1;
  for (int v = 0; v < m.num_vertices(); ++v)
    if (m.vertex(v) == Vec2{0, 0}) center = v;
  REQUIRE(center >= 0);
  CHECK(m.vertex_elements(center).size() == 4);
  int count = 0;
  for (int e : m.vertex_edges(center)) {
    const Edge &ed = m.edge(e);
    REQUIRE_FALSE(ed.boundary());
    CHECK(m.alpha(ed.plus) == R);
    CHECK(m.alpha(ed.minus) == 1.0);
    ++count;
  }
  CHECK(count == 4);
  check_orientation(m);
}

TEST_CASE("orient_edges follows a new coefficient map") {
  const Mesh m = build_mesh(criss_cross({5, 1, 5, 1}));
  const Mesh o = orient_edges(m, {{1, 1.0}, {2, 5.0}, {3, 1.0}, {4, 5.0}});
  check_orientation(o);
  CHECK(o.num_edges() == m.num_edges());
  for (int e = 0; e < o.num_edges(); ++e)
    if (!o.edge(e).boundary()) CHECK(o.alpha(o.edge(e).plus) == 5.0);
}

TEST_CASE("bisect") {
  const Mesh m = build_mesh(two_triangle_square());
  SUBCASE("empty marking leaves the mesh unchanged") {
    const Mesh b = bisect(m, {});
    CHECK(b.num_elements() == m.num_elements());
    CHECK(b.num_edges() == m.num_edges());
    for (int k = 0; k < m.num_elements(); ++k) CHECK(b.element(k).v == m.element(k).v);
  }
  SUBCASE("one marked triangle forces its neighbour through the closure") {
    const std::vector<int> marked{0};
    const Mesh b = bisect(m, marked);
    CHECK(b.num_elements() == 4);
    CHECK(check_invariants(b).empty());
  }
  SUBCASE("invalid id") {
    const std::vector<int> marked{7};
    CHECK_THROWS_AS(bisect(m, marked), MeshError);
  }
}

TEST_CASE("repeated bisection keeps shape regularity") {
  Mesh m = build_mesh(two_triangle_square());
  const double initial = max_shape_ratio(m);
  for (int round = 0; round < 10; ++round) {
    m = bisect_all(m);
    CHECK(max_shape_ratio(m) <= 2.0 * initial);
  }
  CHECK(m.num_elements() == 2 * 1024);
}

TEST_CASE("refinement invariants on random meshes") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    MeshInput in = criss_cross({3, 1, 3, 1});
    Mesh m = build_mesh(in);
    std::uniform_int_distribution<int> coin(0, 2);
    for (int round = 0; round < 6; ++round) {
      std::vector<int> marked;
      for (int k = 0; k < m.num_elements(); ++k)
        if (coin(rng) == 0) marked.push_back(k);
      if (marked.empty()) marked.push_back(0);
      const Mesh b = bisect(m, marked);
      CHECK(b.num_elements() > m.num_elements());
      CHECK(check_invariants(b).empty());
      check_orientation(b);
      CHECK(b.total_area() == doctest::Approx(4.0).epsilon(1e-12));
      for (int k = 0; k < b.num_elements(); ++k)
        CHECK(b.element(k).subdomain == m.element(b.element(k).parent).subdomain);
      m = b;
    }
    int dirichlet = 0;
    for (const auto &e : m.edges()) {
      CHECK((e.boundary() == (e.tag != BoundaryTag::interior)));
      dirichlet += e.tag == BoundaryTag::dirichlet;
    }
    CHECK(dirichlet >= 4);
  }
}

TEST_CASE("edge-element incidence is involutive") {
  std::mt19937_64 rng(3);
  const Mesh m = random_mesh(rng);
  for (int k = 0; k < m.num_elements(); ++k)
    for (int e : m.element(k).edges) CHECK((m.edge(e).plus == k || m.edge(e).minus == k));
  for (int e = 0; e < m.num_edges(); ++e) {
    for (int k : {m.edge(e).plus, m.edge(e).minus}) {
      if (k < 0) continue;
      const auto &ed = m.element(k).edges;
      CHECK(std::count(ed.begin(), ed.end(), e) == 1);
    }
  }
}

TEST_CASE("half_refine") {
  SUBCASE("single triangle") {
    MeshInput in;
    in.vertices = {{0, 0}, {1, 0}, {0, 1}};
    in.triangles = {{{0, 1, 2}, 1}};
    in.tagger = [](const Vec2 &, const Vec2 &) { return BoundaryTag::dirichlet; };
    in.alpha = {{1, 1.0}};
    const HalfMesh h = half_refine(build_mesh(in));
    CHECK(h.mesh.num_elements() == 4);
    CHECK(h.mesh.num_edges() == 9);
    CHECK(h.mesh.num_vertices() == 6);
  }
  SUBCASE("checkerboard: counts, lengths, orientation, genealogy") {
    const Mesh m = bisect_all(build_mesh(criss_cross({7, 1, 7, 1})));
    const HalfMesh h = half_refine(m);
    CHECK(h.mesh.num_elements() == 4 * m.num_elements());
    CHECK(h.mesh.total_area() == doctest::Approx(m.total_area()).epsilon(1e-12));
    std::vector<int> per_parent(m.num_edges(), 0);
    for (int e = 0; e < h.mesh.num_edges(); ++e) {
      const int p = h.parent_edge[e];
      if (p < 0) continue;
      ++per_parent[p];
      CHECK(h.mesh.edge_length(e) == doctest::Approx(0.5 * m.edge_length(p)).epsilon(1e-14));
      const Edge &se = h.mesh.edge(e), &pe = m.edge(p);
      CHECK(se.tag == pe.tag);
      if (!pe.boundary()) {
        CHECK(h.mesh.alpha(se.plus) == m.alpha(pe.plus));
        CHECK(h.mesh.alpha(se.minus) == m.alpha(pe.minus));
      }
    }
    for (int c : per_parent) CHECK(c == 2);
    for (int t = 0; t < h.mesh.num_elements(); ++t) {
      const int k = h.parent_element[t];
      CHECK(m.area(k) == doctest::Approx(4.0 * h.mesh.area(t)).epsilon(1e-13));
      CHECK(h.mesh.alpha(t) == m.alpha(k));
    }
    for (int k = 0; k < m.num_elements(); ++k)
      for (int i = 0; i < 3; ++i) {
        const int t = h.corner[k][i];
        CHECK(h.parent_element[t] == k);
        CHECK(h.mesh.local_vertex(t, m.element(k).v[i]) >= 0);
      }
  }
}

TEST_CASE("vertex_star") {
  SUBCASE("criss-cross center") {
    const Mesh m = build_mesh(criss_cross({1, 1, 1, 1}));
    const VertexStar s = vertex_star(m, 4);
    CHECK(s.cyclic);
    CHECK(s.elements.size() == 4);
    CHECK(s.edges.size() == 4);
    CHECK_FALSE(s.on_dirichlet);
  }
  SUBCASE("square corner") {
    const Mesh m = build_mesh(two_triangle_square());
    const VertexStar s = vertex_star(m, 0);
    CHECK_FALSE(s.cyclic);
    CHECK(s.elements.size() == 1);
    CHECK(s.edges.size() == 2);
    CHECK(m.edge(s.edges.front()).boundary());
    CHECK(m.edge(s.edges.back()).boundary());
    CHECK(s.on_dirichlet);
  }
  SUBCASE("unknown vertex") {
    const Mesh m = build_mesh(two_triangle_square());
    CHECK_THROWS_AS(vertex_star(m, 17), MeshError);
  }
  SUBCASE("consecutive elements share the edge between them") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
      const Mesh m = random_mesh(rng);
      const HalfMesh h = half_refine(m);
      for (int z = 0; z < m.num_vertices(); ++z) {
        const VertexStar s = vertex_star(m, h, z);
        const int n = static_cast<int>(s.elements.size());
        REQUIRE(static_cast<int>(s.edges.size()) == (s.cyclic ? n : n + 1));
        CHECK(static_cast<int>(m.vertex_elements(z).size()) == n);
        for (int i = 0; i < n; ++i) {
          const auto &ed = m.element(s.elements[i]).edges;
          const int before = s.edges[i], after = s.edges[(i + 1) % s.edges.size()];
          CHECK(std::count(ed.begin(), ed.end(), before) == 1);
          CHECK(std::count(ed.begin(), ed.end(), after) == 1);
          for (int e : {before, after}) {
            const auto &v = m.edge(e).v;
            CHECK((v[0] == z || v[1] == z));
          }
          const int t = s.corner_subelements[i];
          CHECK(h.parent_element[t] == s.elements[i]);
          CHECK(h.mesh.local_vertex(t, z) >= 0);
        }
        if (!s.cyclic) {
          CHECK(m.edge(s.edges.front()).boundary());
          CHECK(m.edge(s.edges.back()).boundary());
        }
      }
    }
  }
}

TEST_CASE("mesh text format round trip") {
  std::mt19937_64 rng(5);
  MeshInput in = grid(3);
  in.tagger = [](const Vec2 &a, const Vec2 &b) {
    return a.x == 1 && b.x == 1 ? BoundaryTag::neumann : BoundaryTag::dirichlet;
  };
  in.vertices[5] = {0.1 + 1.0 / 3.0, 0.3 + 1.0 / 3.0};
  const Mesh m = bisect_all(build_mesh(in));
  std::stringstream ss;
  write_mesh(ss, m);
  const std::string text = ss.str();
  CHECK(text.rfind("mesh 2d v", 0) == 0);
  const MeshInput raw = read_mesh_input(ss);
  REQUIRE(raw.triangles.size() == static_cast<std::size_t>(m.num_elements()));
  for (int k = 0; k < m.num_elements(); ++k) CHECK(raw.triangles[k].v == m.element(k).v);
  std::stringstream again_in(text);
  const Mesh r = read_mesh(again_in, m.alpha_map());
  REQUIRE(r.num_vertices() == m.num_vertices());
  REQUIRE(r.num_elements() == m.num_elements());
  for (int v = 0; v < m.num_vertices(); ++v) CHECK(r.vertex(v) == m.vertex(v));
  // the reader may rotate a triangle so that its longest edge comes first
  for (int k = 0; k < m.num_elements(); ++k) {
    auto a = r.element(k).v, b = m.element(k).v;
    while (a[0] != b[0]) std::rotate(a.begin(), a.begin() + 1, a.end());
    CHECK(a == b);
  }
  auto count_neumann = [](const Mesh &x) {
    int n = 0;
    for (const auto &e : x.edges()) n += e.tag == BoundaryTag::neumann;
    return n;
  };
  CHECK(count_neumann(r) == count_neumann(m));
  CHECK(count_neumann(m) >= 3);
}

TEST_CASE("malformed mesh text") {
  std::stringstream ss("mesh 2d v3 t1 e0\n0 0\n1 0\n");
  CHECK_THROWS_AS(read_mesh_input(ss), MeshError);
}
