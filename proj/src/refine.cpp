#include "mesh_builder.hpp"

#include <numeric>

namespace ncafem {

namespace {

struct Refiner {
  const Mesh &mesh;
  std::vector<int> edge_midpoint; // new vertex id per marked edge, -1 otherwise
  MeshInput out;
  std::vector<int> parents;

  int midpoint_of(int a, int b) const {
    const int e = mesh.find_edge(a, b);
    return e < 0 ? -1 : edge_midpoint[e];
  }

  // (t[0], t[1]) is the refinement edge, t[2] the newest vertex.
  void split(std::array<int, 3> t, int subdomain, int parent) {
    const int m = midpoint_of(t[0], t[1]);
    if (m < 0) {
      out.triangles.push_back({t, subdomain});
      parents.push_back(parent);
      return;
    }
    split({t[2], t[0], m}, subdomain, parent);
    split({t[1], t[2], m}, subdomain, parent);
  }
};

} // namespace

Mesh bisect(const Mesh &mesh, std::span<const int> marked) {
  const int ne = mesh.num_edges();
  std::vector<char> edge_marked(ne, 0);
  std::vector<int> queue;
  for (int k : marked) {
    if (k < 0 || k >= mesh.num_elements()) throw MeshError("invalid element id " + std::to_string(k));
    const int r = mesh.element(k).edges[2];
    if (!edge_marked[r]) {
      edge_marked[r] = 1;
      queue.push_back(r);
    }
  }
  if (queue.empty()) return mesh;

  // Closure: any element with a marked edge must have its refinement edge marked.
  while (!queue.empty()) {
    const int e = queue.back();
    queue.pop_back();
    for (int k : {mesh.edge(e).plus, mesh.edge(e).minus}) {
      if (k < 0) continue;
      const int r = mesh.element(k).edges[2];
      if (!edge_marked[r]) {
        edge_marked[r] = 1;
        queue.push_back(r);
      }
    }
  }

  Refiner ref{mesh, std::vector<int>(ne, -1), {}, {}};
  ref.out.vertices.assign(mesh.vertices().begin(), mesh.vertices().end());
  for (int e = 0; e < ne; ++e) {
    if (!edge_marked[e]) continue;
    ref.edge_midpoint[e] = static_cast<int>(ref.out.vertices.size());
    ref.out.vertices.push_back(mesh.edge(e).midpoint);
  }
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto &el = mesh.element(k);
    ref.split(el.v, el.subdomain, k);
  }
  for (int e = 0; e < ne; ++e) {
    const auto &ed = mesh.edge(e);
    if (!ed.boundary()) continue;
    const int m = ref.edge_midpoint[e];
    if (m < 0) {
      ref.out.boundary_edges.push_back({ed.v[0], ed.v[1], ed.tag});
    } else {
      ref.out.boundary_edges.push_back({ed.v[0], m, ed.tag});
      ref.out.boundary_edges.push_back({m, ed.v[1], ed.tag});
    }
  }
  ref.out.alpha = mesh.alpha_map();
  BuildOptions opts;
  opts.check_geometry = false;
  opts.parents = std::move(ref.parents);
  return MeshBuilder::make(std::move(ref.out), std::move(opts));
}

Mesh bisect_all(const Mesh &mesh) {
  std::vector<int> all(mesh.num_elements());
  std::iota(all.begin(), all.end(), 0);
  return bisect(mesh, all);
}

} // namespace ncafem
