#pragma once

#include "ncafem/geometry.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace ncafem {

class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class BoundaryTag : std::uint8_t { interior, dirichlet, neumann };

enum class VertexKind : std::uint8_t { interior, dirichlet, neumann };

struct Element {
  std::array<int, 3> v{};     ///< counter-clockwise; (v[0], v[1]) is the refinement edge
  std::array<int, 3> edges{}; ///< local edge i is opposite v[i]
  int subdomain = 0;
  int parent = -1; ///< element of the previous mesh generation (-1 for initial meshes)
};

struct Edge {
  std::array<int, 2> v{};
  Vec2 midpoint;
  int plus = -1;  ///< K_e^+: larger coefficient, the only element on boundary edges
  int minus = -1; ///< K_e^-: -1 on boundary edges
  BoundaryTag tag = BoundaryTag::interior;

  bool boundary() const { return minus < 0; }
};

struct TaggedEdge {
  int v0 = 0;
  int v1 = 0;
  BoundaryTag tag = BoundaryTag::dirichlet;
};

using AlphaMap = std::map<int, double>;
using BoundaryTagger = std::function<BoundaryTag(const Vec2 &, const Vec2 &)>;

struct Triangle {
  std::array<int, 3> v{};
  int subdomain = 0;
};

/// Raw description of an initial triangulation.
struct MeshInput {
  std::vector<Vec2> vertices;
  std::vector<Triangle> triangles;
  std::vector<TaggedEdge> boundary_edges; ///< explicit boundary tags
  BoundaryTagger tagger;                  ///< consulted for boundary edges not listed explicitly
  AlphaMap alpha;                         ///< coefficient per subdomain id
  std::map<int, std::vector<Vec2>> subdomain_polygons; ///< optional, enables interface checks
};

/// Conforming triangulation with edge topology.  Immutable once built.
class Mesh {
public:
  Mesh() = default;

  std::uint64_t id() const { return id_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const Element> elements() const { return elements_; }
  std::span<const Edge> edges() const { return edges_; }

  const Vec2 &vertex(int v) const { return vertices_[v]; }
  const Element &element(int k) const { return elements_[k]; }
  const Edge &edge(int e) const { return edges_[e]; }

  const AlphaMap &alpha_map() const { return alpha_; }
  double alpha(int k) const { return element_alpha_[k]; }

  TriangleCoords coords(int k) const {
    const auto &t = elements_[k].v;
    return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
  }
  double area(int k) const;
  double diameter(int k) const;
  double edge_length(int e) const;
  /// Unit normal of edge e pointing out of its plus element.
  Vec2 normal(int e) const;
  /// Unit tangent (-n_y, n_x) of edge e.
  Vec2 tangent(int e) const;

  std::span<const int> vertex_elements(int v) const;
  std::span<const int> vertex_edges(int v) const;
  VertexKind vertex_kind(int v) const { return vertex_kind_[v]; }

  /// Local index of vertex v in element k, or -1.
  int local_vertex(int k, int v) const;
  /// Local index of edge e in element k, or -1.
  int local_edge(int k, int e) const;
  /// Edge joining vertices a and b, or -1.
  int find_edge(int a, int b) const;

  double total_area() const;

  friend class MeshBuilder;

private:
  std::uint64_t id_ = 0;
  std::vector<Vec2> vertices_;
  std::vector<Element> elements_;
  std::vector<Edge> edges_;
  AlphaMap alpha_;
  std::vector<double> element_alpha_;
  std::vector<int> v2e_offsets_, v2e_items_;   // vertex -> elements
  std::vector<int> v2ed_offsets_, v2ed_items_; // vertex -> edges
  std::vector<VertexKind> vertex_kind_;
  std::unordered_map<std::uint64_t, int> edge_lookup_;
};

/// Builds an initial mesh; the longest edge of each triangle becomes its refinement edge.
Mesh build_mesh(const MeshInput &input);

/// Same topology, plus/minus sides reassigned for a new coefficient map.
Mesh orient_edges(const Mesh &mesh, const AlphaMap &alpha);

/// Newest-vertex bisection of the marked elements plus conforming closure.
Mesh bisect(const Mesh &mesh, std::span<const int> marked);

/// Bisects every element once.
Mesh bisect_all(const Mesh &mesh);

/// Red refinement of every element into four (the h/2 mesh).
struct HalfMesh {
  Mesh mesh;
  std::vector<int> parent_element;          ///< per sub-element
  std::vector<int> parent_edge;             ///< per sub-edge; -1 for edges inside a parent
  std::vector<std::array<int, 3>> corner;   ///< per parent: sub-element at local vertex i
  int parent_vertices = 0;

  /// Half-mesh vertex sitting at the midpoint of parent edge e.
  int midpoint_vertex(int e) const { return parent_vertices + e; }
};

HalfMesh half_refine(const Mesh &mesh);

/// Elements and edges around a vertex in counter-clockwise order.
///
/// elements[i] lies between edges[i] and edges[i + 1] (cyclically for interior
/// vertices).  A boundary vertex has one more edge than elements, with the
/// first and last edges on the boundary.
struct VertexStar {
  int vertex = -1;
  std::vector<int> elements;
  std::vector<int> edges;
  bool cyclic = false;
  bool on_dirichlet = false;
  bool on_neumann = false;
  std::vector<int> corner_subelements; ///< T_{K,z} per element, filled when a HalfMesh is given
};

VertexStar vertex_star(const Mesh &mesh, int z);
VertexStar vertex_star(const Mesh &mesh, const HalfMesh &half, int z);

/// Violated invariants (empty when the mesh is consistent).
std::vector<std::string> check_invariants(const Mesh &mesh);

/// Largest h_K / rho_K over the mesh.
double max_shape_ratio(const Mesh &mesh);

// Line-oriented text format: header `mesh 2d v<Nv> t<Nt> e<Nb>`, then vertices,
// triangles with subdomain ids, and tagged boundary edges (D or N).
void write_mesh(std::ostream &os, const Mesh &mesh);
Mesh read_mesh(std::istream &is, const AlphaMap &alpha);
MeshInput read_mesh_input(std::istream &is);

} // namespace ncafem
