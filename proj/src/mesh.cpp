#include "mesh_builder.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>

namespace ncafem {

namespace {

std::atomic<std::uint64_t> next_mesh_id{1};

void build_csr(int n, const std::vector<std::pair<int, int>> &pairs, std::vector<int> &offsets,
               std::vector<int> &items) {
  offsets.assign(n + 1, 0);
  for (const auto &[key, _] : pairs) ++offsets[key + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  items.assign(pairs.size(), 0);
  std::vector<int> fill(offsets.begin(), offsets.end() - 1);
  for (const auto &[key, value] : pairs) items[fill[key]++] = value;
}

} // namespace

double Mesh::area(int k) const {
  const auto c = coords(k);
  return signed_area(c[0], c[1], c[2]);
}

double Mesh::diameter(int k) const { return ncafem::diameter(coords(k)); }

double Mesh::edge_length(int e) const {
  const auto &ed = edges_[e];
  return norm(vertices_[ed.v[1]] - vertices_[ed.v[0]]);
}

Vec2 Mesh::normal(int e) const {
  const auto &ed = edges_[e];
  const Vec2 d = vertices_[ed.v[1]] - vertices_[ed.v[0]];
  const double len = norm(d);
  Vec2 n{d.y / len, -d.x / len};
  // Orient away from the plus element's interior.
  const auto c = coords(ed.plus);
  const Vec2 centroid = (1.0 / 3.0) * (c[0] + c[1] + c[2]);
  if (dot(n, ed.midpoint - centroid) < 0.0) n = -n;
  return n;
}

Vec2 Mesh::tangent(int e) const {
  const Vec2 n = normal(e);
  return {-n.y, n.x};
}

std::span<const int> Mesh::vertex_elements(int v) const {
  return {v2e_items_.data() + v2e_offsets_[v],
          static_cast<std::size_t>(v2e_offsets_[v + 1] - v2e_offsets_[v])};
}

std::span<const int> Mesh::vertex_edges(int v) const {
  return {v2ed_items_.data() + v2ed_offsets_[v],
          static_cast<std::size_t>(v2ed_offsets_[v + 1] - v2ed_offsets_[v])};
}

int Mesh::local_vertex(int k, int v) const {
  const auto &t = elements_[k].v;
  for (int i = 0; i < 3; ++i)
    if (t[i] == v) return i;
  return -1;
}

int Mesh::local_edge(int k, int e) const {
  const auto &t = elements_[k].edges;
  for (int i = 0; i < 3; ++i)
    if (t[i] == e) return i;
  return -1;
}

int Mesh::find_edge(int a, int b) const {
  const auto it = edge_lookup_.find(pair_key(a, b));
  return it == edge_lookup_.end() ? -1 : it->second;
}

double Mesh::total_area() const {
  double s = 0.0;
  for (int k = 0; k < num_elements(); ++k) s += area(k);
  return s;
}

void MeshBuilder::assign_orientation(Mesh &mesh) {
  mesh.element_alpha_.resize(mesh.elements_.size());
  for (std::size_t k = 0; k < mesh.elements_.size(); ++k) {
    const int sd = mesh.elements_[k].subdomain;
    const auto it = mesh.alpha_.find(sd);
    if (it == mesh.alpha_.end())
      throw MeshError("no coefficient for subdomain " + std::to_string(sd));
    if (!(it->second > 0.0))
      throw MeshError("coefficient must be positive on subdomain " + std::to_string(sd));
    mesh.element_alpha_[k] = it->second;
  }
  for (auto &e : mesh.edges_) {
    if (e.minus < 0) continue;
    const int a = std::min(e.plus, e.minus);
    const int b = std::max(e.plus, e.minus);
    const double aa = mesh.element_alpha_[a];
    const double ab = mesh.element_alpha_[b];
    if (ab > aa) {
      e.plus = b;
      e.minus = a;
    } else {
      e.plus = a;
      e.minus = b;
    }
  }
}

Mesh MeshBuilder::make(MeshInput input, BuildOptions options) {
  Mesh mesh;
  mesh.id_ = next_mesh_id++;
  mesh.vertices_ = std::move(input.vertices);
  mesh.alpha_ = std::move(input.alpha);
  const int nv = static_cast<int>(mesh.vertices_.size());
  const auto &P = mesh.vertices_;

  mesh.elements_.reserve(input.triangles.size());
  for (std::size_t k = 0; k < input.triangles.size(); ++k) {
    auto t = input.triangles[k];
    for (int i = 0; i < 3; ++i) {
      if (t.v[i] < 0 || t.v[i] >= nv)
        throw MeshError("vertex index out of range in triangle " + std::to_string(k));
    }
    if (t.v[0] == t.v[1] || t.v[1] == t.v[2] || t.v[0] == t.v[2])
      throw MeshError("degenerate element " + std::to_string(k));
    double a = signed_area(P[t.v[0]], P[t.v[1]], P[t.v[2]]);
    if (a == 0.0) throw MeshError("zero-area triangle " + std::to_string(k));
    if (a < 0.0) std::swap(t.v[0], t.v[1]);
    if (options.longest_edge_first) {
      auto len = [&](int i, int j) { return norm(P[t.v[j]] - P[t.v[i]]); };
      const double l01 = len(0, 1), l12 = len(1, 2), l20 = len(2, 0);
      const double lmax = std::max({l01, l12, l20});
      if (l01 < lmax * (1.0 - 1e-12)) {
        // rotate so the longest edge comes first
        if (l12 >= l20) t.v = {t.v[1], t.v[2], t.v[0]};
        else t.v = {t.v[2], t.v[0], t.v[1]};
      }
    }
    Element el;
    el.v = t.v;
    el.subdomain = t.subdomain;
    el.parent = options.parents.empty() ? -1 : options.parents[k];
    mesh.elements_.push_back(el);
  }

  // edges
  std::vector<int> incidence;
  for (std::size_t k = 0; k < mesh.elements_.size(); ++k) {
    auto &el = mesh.elements_[k];
    for (int i = 0; i < 3; ++i) {
      const int a = el.v[(i + 1) % 3];
      const int b = el.v[(i + 2) % 3];
      auto [it, inserted] = mesh.edge_lookup_.try_emplace(pair_key(a, b), mesh.num_edges());
      if (inserted) {
        Edge e;
        e.v = {a, b};
        e.midpoint = midpoint(P[a], P[b]);
        e.plus = static_cast<int>(k);
        mesh.edges_.push_back(e);
        incidence.push_back(1);
      } else {
        auto &e = mesh.edges_[it->second];
        if (++incidence[it->second] > 2)
          throw MeshError("non-conforming input: edge shared by more than two elements");
        e.minus = static_cast<int>(k);
      }
      el.edges[i] = it->second;
    }
  }

  // boundary tags
  std::unordered_map<std::uint64_t, BoundaryTag> explicit_tags;
  for (const auto &te : input.boundary_edges) explicit_tags[pair_key(te.v0, te.v1)] = te.tag;
  std::size_t used_tags = 0;
  for (auto &e : mesh.edges_) {
    if (e.minus >= 0) continue;
    const auto it = explicit_tags.find(pair_key(e.v[0], e.v[1]));
    if (it != explicit_tags.end()) {
      e.tag = it->second;
      ++used_tags;
    } else if (input.tagger) {
      e.tag = input.tagger(P[e.v[0]], P[e.v[1]]);
    } else {
      e.tag = BoundaryTag::interior;
    }
    if (options.check_geometry) {
      for (int v = 0; v < nv; ++v) {
        if (v == e.v[0] || v == e.v[1]) continue;
        if (point_on_segment(P[v], P[e.v[0]], P[e.v[1]], 1e-12 * norm(P[e.v[1]] - P[e.v[0]])))
          throw MeshError("non-conforming input: hanging node " + std::to_string(v));
      }
    }
    if (e.tag == BoundaryTag::interior) {
      std::ostringstream os;
      os << "untagged boundary edge (" << e.v[0] << ", " << e.v[1] << ")";
      throw MeshError(os.str());
    }
  }
  if (used_tags != explicit_tags.size())
    throw MeshError("tagged boundary edge is not on the mesh boundary");

  if (options.check_geometry && !input.subdomain_polygons.empty()) {
    for (std::size_t k = 0; k < mesh.elements_.size(); ++k) {
      const auto &el = mesh.elements_[k];
      const auto it = input.subdomain_polygons.find(el.subdomain);
      if (it == input.subdomain_polygons.end()) continue;
      const auto c = mesh.coords(static_cast<int>(k));
      const Vec2 centroid = (1.0 / 3.0) * (c[0] + c[1] + c[2]);
      bool ok = point_in_polygon(centroid, it->second);
      for (const auto &p : c) ok = ok && point_in_polygon(p, it->second, 1e-10);
      if (!ok)
        throw MeshError("interface cuts element " + std::to_string(k) + " (subdomain " +
                        std::to_string(el.subdomain) + ")");
    }
  }

  assign_orientation(mesh);

  // adjacency
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(3 * mesh.elements_.size());
  for (int k = 0; k < mesh.num_elements(); ++k)
    for (int v : mesh.elements_[k].v) pairs.emplace_back(v, k);
  build_csr(nv, pairs, mesh.v2e_offsets_, mesh.v2e_items_);
  pairs.clear();
  for (int e = 0; e < mesh.num_edges(); ++e)
    for (int v : mesh.edges_[e].v) pairs.emplace_back(v, e);
  build_csr(nv, pairs, mesh.v2ed_offsets_, mesh.v2ed_items_);

  mesh.vertex_kind_.assign(nv, VertexKind::interior);
  for (const auto &e : mesh.edges_) {
    if (e.tag == BoundaryTag::interior) continue;
    for (int v : e.v) {
      if (e.tag == BoundaryTag::dirichlet) mesh.vertex_kind_[v] = VertexKind::dirichlet;
      else if (mesh.vertex_kind_[v] == VertexKind::interior) mesh.vertex_kind_[v] = VertexKind::neumann;
    }
  }
  return mesh;
}

Mesh build_mesh(const MeshInput &input) {
  BuildOptions opts;
  opts.longest_edge_first = true;
  return MeshBuilder::make(input, opts);
}

Mesh orient_edges(const Mesh &mesh, const AlphaMap &alpha) {
  MeshInput in;
  in.vertices.assign(mesh.vertices().begin(), mesh.vertices().end());
  for (const auto &el : mesh.elements()) in.triangles.push_back({el.v, el.subdomain});
  for (const auto &e : mesh.edges())
    if (e.boundary()) in.boundary_edges.push_back({e.v[0], e.v[1], e.tag});
  in.alpha = alpha;
  BuildOptions opts;
  opts.check_geometry = false;
  for (const auto &el : mesh.elements()) opts.parents.push_back(el.parent);
  return MeshBuilder::make(std::move(in), opts);
}

std::vector<std::string> check_invariants(const Mesh &mesh) {
  std::vector<std::string> errs;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    if (!(mesh.area(k) > 0.0)) errs.push_back("non-positive area on element " + std::to_string(k));
    const auto &el = mesh.element(k);
    for (int i = 0; i < 3; ++i) {
      const auto &e = mesh.edge(el.edges[i]);
      if (e.plus != k && e.minus != k)
        errs.push_back("edge-element incidence broken at element " + std::to_string(k));
      const int a = el.v[(i + 1) % 3], b = el.v[(i + 2) % 3];
      if (!((e.v[0] == a && e.v[1] == b) || (e.v[0] == b && e.v[1] == a)))
        errs.push_back("local edge numbering broken at element " + std::to_string(k));
    }
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto &ed = mesh.edge(e);
    if (mesh.local_edge(ed.plus, e) < 0) errs.push_back("plus element does not list edge " + std::to_string(e));
    if (ed.minus >= 0) {
      if (mesh.local_edge(ed.minus, e) < 0)
        errs.push_back("minus element does not list edge " + std::to_string(e));
      if (ed.tag != BoundaryTag::interior) errs.push_back("interior edge carries a boundary tag");
      const double ap = mesh.alpha(ed.plus), am = mesh.alpha(ed.minus);
      if (ap < am) errs.push_back("orientation violated on edge " + std::to_string(e));
      if (ap == am && ed.plus > ed.minus) errs.push_back("tie-break violated on edge " + std::to_string(e));
    } else if (ed.tag == BoundaryTag::interior) {
      errs.push_back("untagged boundary edge " + std::to_string(e));
    }
  }
  return errs;
}

double max_shape_ratio(const Mesh &mesh) {
  double r = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto c = mesh.coords(k);
    r = std::max(r, ncafem::diameter(c) / inscribed_diameter(c));
  }
  return r;
}

VertexStar vertex_star(const Mesh &mesh, int z) {
  if (z < 0 || z >= mesh.num_vertices()) throw MeshError("unknown vertex id " + std::to_string(z));
  VertexStar star;
  star.vertex = z;
  const auto incident = mesh.vertex_elements(z);
  const int n = static_cast<int>(incident.size());
  // For each incident element: entry edge (clockwise side) and exit edge (counter-clockwise side).
  std::vector<int> entry(n), exit(n);
  for (int i = 0; i < n; ++i) {
    const int k = incident[i];
    const int li = mesh.local_vertex(k, z);
    const auto &el = mesh.element(k);
    entry[i] = el.edges[(li + 2) % 3]; // edge z - v[li+1]
    exit[i] = el.edges[(li + 1) % 3];  // edge z - v[li+2]
  }
  int start = -1;
  for (int i = 0; i < n; ++i)
    if (mesh.edge(entry[i]).boundary()) start = i;
  star.cyclic = start < 0;
  if (star.cyclic) {
    // start at the lowest element id for determinism
    start = static_cast<int>(std::min_element(incident.begin(), incident.end()) - incident.begin());
  }
  std::vector<bool> used(n, false);
  int cur = start;
  star.edges.push_back(entry[cur]);
  for (int step = 0; step < n; ++step) {
    used[cur] = true;
    star.elements.push_back(incident[cur]);
    star.edges.push_back(exit[cur]);
    const int e = exit[cur];
    int next = -1;
    for (int i = 0; i < n; ++i)
      if (!used[i] && entry[i] == e) next = i;
    if (next < 0) break;
    cur = next;
  }
  if (static_cast<int>(star.elements.size()) != n)
    throw MeshError("vertex star is not a single fan at vertex " + std::to_string(z));
  if (star.cyclic) star.edges.pop_back(); // last exit edge equals the first entry edge
  for (int e : {star.edges.front(), star.edges.back()}) {
    const auto tag = mesh.edge(e).tag;
    if (tag == BoundaryTag::dirichlet) star.on_dirichlet = true;
    if (tag == BoundaryTag::neumann) star.on_neumann = true;
  }
  if (star.cyclic) star.on_dirichlet = star.on_neumann = false;
  return star;
}

VertexStar vertex_star(const Mesh &mesh, const HalfMesh &half, int z) {
  VertexStar star = vertex_star(mesh, z);
  for (int k : star.elements) star.corner_subelements.push_back(half.corner[k][mesh.local_vertex(k, z)]);
  return star;
}

HalfMesh half_refine(const Mesh &mesh) {
  HalfMesh half;
  half.parent_vertices = mesh.num_vertices();
  MeshInput in;
  in.vertices.assign(mesh.vertices().begin(), mesh.vertices().end());
  for (const auto &e : mesh.edges()) in.vertices.push_back(e.midpoint);
  in.alpha = mesh.alpha_map();
  BuildOptions opts;
  opts.check_geometry = false;
  half.corner.resize(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto &el = mesh.element(k);
    const int a = el.v[0], b = el.v[1], c = el.v[2];
    const int m0 = half.midpoint_vertex(el.edges[0]); // on (b, c)
    const int m1 = half.midpoint_vertex(el.edges[1]); // on (c, a)
    const int m2 = half.midpoint_vertex(el.edges[2]); // on (a, b)
    const int base = static_cast<int>(in.triangles.size());
    in.triangles.push_back({{a, m2, m1}, el.subdomain});
    in.triangles.push_back({{m2, b, m0}, el.subdomain});
    in.triangles.push_back({{m1, m0, c}, el.subdomain});
    in.triangles.push_back({{m0, m1, m2}, el.subdomain});
    half.corner[k] = {base, base + 1, base + 2};
    for (int i = 0; i < 4; ++i) {
      half.parent_element.push_back(k);
      opts.parents.push_back(k);
    }
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto &ed = mesh.edge(e);
    if (!ed.boundary()) continue;
    const int m = half.midpoint_vertex(e);
    in.boundary_edges.push_back({ed.v[0], m, ed.tag});
    in.boundary_edges.push_back({m, ed.v[1], ed.tag});
  }
  half.mesh = MeshBuilder::make(std::move(in), opts);
  half.parent_edge.assign(half.mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const auto &ed = mesh.edge(e);
    const int m = half.midpoint_vertex(e);
    half.parent_edge[half.mesh.find_edge(ed.v[0], m)] = e;
    half.parent_edge[half.mesh.find_edge(m, ed.v[1])] = e;
  }
  return half;
}

} // namespace ncafem
