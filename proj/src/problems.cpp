#include "ncafem/problems.hpp"

#include "ncafem/quad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ncafem {

namespace {

constexpr double pi = std::numbers::pi;

double theta_of(const Vec2 &p) {
  double t = std::atan2(p.y, p.x);
  if (t < 0.0) t += 2.0 * pi;
  return t;
}

// theta of p, shifted by a multiple of 2 pi to lie within pi of theta of `side`
double theta_near(const Vec2 &p, const Vec2 &side) {
  const double ts = theta_of(side);
  double t = theta_of(p);
  t += 2.0 * pi * std::round((ts - t) / (2.0 * pi));
  return t;
}

// Quadrant branch; points on quadrant boundaries take the lower-theta branch.
int branch_of(double theta) {
  const int k = static_cast<int>(std::ceil(theta / (0.5 * pi))) - 1;
  return std::clamp(k, 0, 3);
}

BoundaryTagger polygon_tagger(std::vector<Vec2> polygon, BoundaryTag tag) {
  return [polygon = std::move(polygon), tag](const Vec2 &a, const Vec2 &b) {
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2 &p = polygon[i], &q = polygon[(i + 1) % n];
      if (point_on_segment(a, p, q) && point_on_segment(b, p, q)) return tag;
    }
    return BoundaryTag::interior;
  };
}

std::vector<BoundarySegment> segments_of(const std::vector<Vec2> &polygon, BoundaryTag tag) {
  std::vector<BoundarySegment> out;
  for (std::size_t i = 0; i < polygon.size(); ++i)
    out.push_back({polygon[i], polygon[(i + 1) % polygon.size()], tag});
  return out;
}

// Union-jack triangulation of unit squares with lower-left corners `cells`,
// diagonals through the origin.
MeshInput origin_fan_mesh(const std::vector<std::pair<Vec2, int>> &cells) {
  MeshInput in;
  auto vid = [&](Vec2 p) {
    for (std::size_t i = 0; i < in.vertices.size(); ++i)
      if (in.vertices[i] == p) return static_cast<int>(i);
    in.vertices.push_back(p);
    return static_cast<int>(in.vertices.size() - 1);
  };
  for (const auto &[ll, sd] : cells) {
    const int a = vid(ll), b = vid(ll + Vec2{1, 0}), c = vid(ll + Vec2{1, 1}), d = vid(ll + Vec2{0, 1});
    // the diagonal through the origin
    const bool ac = (ll == Vec2{0, 0}) || (ll == Vec2{-1, -1});
    if (ac) {
      in.triangles.push_back({{a, b, c}, sd});
      in.triangles.push_back({{a, c, d}, sd});
    } else {
      in.triangles.push_back({{a, b, d}, sd});
      in.triangles.push_back({{b, c, d}, sd});
    }
  }
  return in;
}

} // namespace

AlphaMap ProblemSpec::alpha_map() const {
  AlphaMap m;
  for (const auto &s : subdomains) m[s.id] = s.alpha;
  return m;
}

double ProblemSpec::alpha(int subdomain) const {
  for (const auto &s : subdomains)
    if (s.id == subdomain) return s.alpha;
  throw ProblemError("no coefficient for subdomain " + std::to_string(subdomain));
}

Mesh ProblemSpec::build_initial_mesh() const {
  MeshInput in = initial_mesh;
  in.alpha = alpha_map();
  if (!in.tagger) in.tagger = boundary;
  for (const auto &s : subdomains)
    if (!s.polygon.empty()) in.subdomain_polygons[s.id] = s.polygon;
  return build_mesh(in);
}

int singular_vertex(const ProblemSpec &spec, const TriangleCoords &t) {
  for (const auto &s : spec.singular_points)
    for (int i = 0; i < 3; ++i)
      if (norm(t[i] - s) <= 1e-14 * (1.0 + norm(s))) return i;
  return -1;
}

double kellogg_mu(double theta, int branch) {
  const double b = kKelloggBeta, s = kKelloggSigma, r = pi / 4.0;
  switch (branch) {
  case 0: return std::cos((pi / 2.0 - s) * b) * std::cos((theta - pi / 2.0 + r) * b);
  case 1: return std::cos(r * b) * std::cos((theta - pi + s) * b);
  case 2: return std::cos(s * b) * std::cos((theta - pi - r) * b);
  default: return std::cos((pi / 2.0 - r) * b) * std::cos((theta - 3.0 * pi / 2.0 - s) * b);
  }
}

double kellogg_dmu(double theta, int branch) {
  const double b = kKelloggBeta, s = kKelloggSigma, r = pi / 4.0;
  switch (branch) {
  case 0: return -b * std::cos((pi / 2.0 - s) * b) * std::sin((theta - pi / 2.0 + r) * b);
  case 1: return -b * std::cos(r * b) * std::sin((theta - pi + s) * b);
  case 2: return -b * std::cos(s * b) * std::sin((theta - pi - r) * b);
  default: return -b * std::cos((pi / 2.0 - r) * b) * std::sin((theta - 3.0 * pi / 2.0 - s) * b);
  }
}

ProblemSpec kellogg_problem() {
  ProblemSpec spec;
  spec.name = "kellogg";
  spec.domain = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  spec.subdomains = {
      {1, kKelloggR, "(0,1)^2", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}},
      {2, 1.0, "(-1,0)x(0,1)", {{-1, 0}, {0, 0}, {0, 1}, {-1, 1}}},
      {3, kKelloggR, "(-1,0)^2", {{-1, -1}, {0, -1}, {0, 0}, {-1, 0}}},
      {4, 1.0, "(0,1)x(-1,0)", {{0, -1}, {1, -1}, {1, 0}, {0, 0}}},
  };
  spec.boundary_segments = segments_of(spec.domain, BoundaryTag::dirichlet);
  spec.boundary = polygon_tagger(spec.domain, BoundaryTag::dirichlet);
  spec.f = [](const Vec2 &, int) { return 0.0; };
  spec.f_is_zero = true;
  spec.g_neumann = [](const Vec2 &) { return 0.0; };

  ExactSolution ex;
  ex.value = [](const Vec2 &p, const Vec2 &side) {
    const double r = norm(p);
    if (r == 0.0) return 0.0;
    const double t = theta_near(p, side);
    return std::pow(r, kKelloggBeta) * kellogg_mu(t, branch_of(theta_of(side)));
  };
  ex.gradient = [](const Vec2 &p, const Vec2 &side) {
    const double r = norm(p);
    if (r == 0.0) return Vec2{0.0, 0.0};
    const double t = theta_near(p, side);
    const int k = branch_of(theta_of(side));
    const double rb = std::pow(r, kKelloggBeta - 1.0);
    const double ur = kKelloggBeta * rb * kellogg_mu(t, k);
    const double ut = rb * kellogg_dmu(t, k);
    const double c = p.x / r, s = p.y / r;
    return Vec2{ur * c - ut * s, ur * s + ut * c};
  };
  ex.energy_norm = kKelloggEnergyNorm;
  ex.energy_norm_note = "1D angular reduction, 30-digit adaptive quadrature";
  spec.g_dirichlet = [v = ex.value](const Vec2 &p) { return v(p, p); };
  spec.exact = std::move(ex);
  spec.singular_points = {{0.0, 0.0}};
  spec.initial_mesh = origin_fan_mesh({{{0, 0}, 1}, {{-1, 0}, 2}, {{-1, -1}, 3}, {{0, -1}, 4}});
  return spec;
}

ProblemSpec lshape_problem() {
  ProblemSpec spec;
  spec.name = "lshape";
  spec.domain = {{-1, -1}, {0, -1}, {0, 0}, {1, 0}, {1, 1}, {-1, 1}};
  spec.subdomains = {{1, 1.0, "Omega", spec.domain}};
  spec.boundary_segments = segments_of(spec.domain, BoundaryTag::dirichlet);
  spec.boundary = polygon_tagger(spec.domain, BoundaryTag::dirichlet);
  spec.f = [](const Vec2 &, int) { return 0.0; };
  spec.f_is_zero = true;
  spec.g_neumann = [](const Vec2 &) { return 0.0; };

  ExactSolution ex;
  ex.value = [](const Vec2 &p, const Vec2 &) {
    const double r = norm(p);
    if (r == 0.0) return 0.0;
    return std::pow(r, 2.0 / 3.0) * std::sin((2.0 * theta_of(p) + pi) / 3.0);
  };
  ex.gradient = [](const Vec2 &p, const Vec2 &) {
    const double r = norm(p);
    if (r == 0.0) return Vec2{0.0, 0.0};
    const double t = theta_of(p);
    const double phi = (2.0 * t + pi) / 3.0;
    const double rb = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0);
    const double ur = rb * std::sin(phi);
    const double ut = rb * std::cos(phi);
    const double c = p.x / r, s = p.y / r;
    return Vec2{ur * c - ut * s, ur * s + ut * c};
  };
  ex.energy_norm = kLShapeEnergyNorm;
  ex.energy_norm_note = "1D angular reduction, 30-digit adaptive quadrature";
  spec.g_dirichlet = [v = ex.value](const Vec2 &p) { return v(p, p); };
  spec.exact = std::move(ex);
  spec.singular_points = {{0.0, 0.0}};
  spec.initial_mesh = origin_fan_mesh({{{0, 0}, 1}, {{-1, 0}, 1}, {{-1, -1}, 1}});
  return spec;
}

EnergyNormEstimate energy_norm_of_exact(const ProblemSpec &spec, int depth, int grading_levels) {
  if (!spec.exact) throw ProblemError("problem '" + spec.name + "' has no exact solution");
  const auto &ex = *spec.exact;
  auto squared = [&](const Mesh &mesh) {
    double total = 0.0;
    for (int k = 0; k < mesh.num_elements(); ++k) {
      const auto t = mesh.coords(k);
      const Vec2 side = (1.0 / 3.0) * (t[0] + t[1] + t[2]);
      auto integrand = [&](const Vec2 &x) {
        const Vec2 g = ex.gradient(x, side);
        return dot(g, g);
      };
      const int sv = singular_vertex(spec, t);
      const double v = sv >= 0 ? graded_tri_integrate(integrand, t, sv, grading_levels, kErrorDegree)
                               : integrate(tri_rule(kErrorDegree), t, integrand);
      total += mesh.alpha(k) * v;
    }
    return total;
  };
  Mesh mesh = spec.build_initial_mesh();
  for (int i = 0; i + 1 < depth; ++i) mesh = bisect_all(mesh);
  const double coarse = std::sqrt(squared(mesh));
  if (depth > 0) mesh = bisect_all(mesh);
  const double fine = depth > 0 ? std::sqrt(squared(mesh)) : coarse;
  return {fine, std::abs(fine - coarse) / fine};
}

nlohmann::json describe_problem(const ProblemSpec &spec) {
  using nlohmann::json;
  auto pt = [](const Vec2 &p) { return json::array({p.x, p.y}); };
  auto tag = [](BoundaryTag t) { return t == BoundaryTag::dirichlet ? "D" : "N"; };
  json out;
  out["problem"] = spec.name;
  json dom = json::array();
  for (const auto &p : spec.domain) dom.push_back(pt(p));
  out["domain"] = dom;
  json sds = json::array();
  for (const auto &s : spec.subdomains) {
    json j{{"id", s.id}, {"alpha", s.alpha}};
    if (!s.label.empty()) j["label"] = s.label;
    if (!s.polygon.empty()) {
      json poly = json::array();
      for (const auto &p : s.polygon) poly.push_back(pt(p));
      j["polygon"] = poly;
    }
    sds.push_back(j);
  }
  out["subdomains"] = sds;
  json segs = json::array();
  bool any_n = false;
  for (const auto &b : spec.boundary_segments) {
    segs.push_back({{"from", pt(b.from)}, {"to", pt(b.to)}, {"type", tag(b.tag)}});
    any_n = any_n || b.tag == BoundaryTag::neumann;
  }
  out["boundary"] = segs;
  out["boundary_partition"] = any_n ? "mixed" : "pure Dirichlet";
  out["exact_solution"] = spec.exact.has_value();
  if (spec.exact) out["exact_energy_norm"] = spec.exact->energy_norm;
  json sing = json::array();
  for (const auto &p : spec.singular_points) sing.push_back(pt(p));
  out["singular_points"] = sing;
  if (!spec.source.is_null()) out["source"] = spec.source;
  return out;
}

} // namespace ncafem
