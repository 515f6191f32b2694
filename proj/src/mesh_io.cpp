#include "ncafem/mesh.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace ncafem {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int parse_count(const std::string &token, char prefix) {
  if (token.size() < 2 || token[0] != prefix)
    throw MeshError("malformed mesh header token '" + token + "'");
  try {
    return std::stoi(token.substr(1));
  } catch (const std::exception &) {
    throw MeshError("malformed mesh header token '" + token + "'");
  }
}

} // namespace

void write_mesh(std::ostream &os, const Mesh &mesh) {
  int nb = 0;
  for (const auto &e : mesh.edges()) nb += e.boundary() ? 1 : 0;
  os << "mesh 2d v" << mesh.num_vertices() << " t" << mesh.num_elements() << " e" << nb << '\n';
  for (const auto &p : mesh.vertices()) os << format_double(p.x) << ' ' << format_double(p.y) << '\n';
  for (const auto &el : mesh.elements())
    os << el.v[0] << ' ' << el.v[1] << ' ' << el.v[2] << ' ' << el.subdomain << '\n';
  for (const auto &e : mesh.edges()) {
    if (!e.boundary()) continue;
    os << e.v[0] << ' ' << e.v[1] << ' ' << (e.tag == BoundaryTag::dirichlet ? 'D' : 'N') << '\n';
  }
}

MeshInput read_mesh_input(std::istream &is) {
  std::string line;
  if (!std::getline(is, line)) throw MeshError("empty mesh stream");
  std::istringstream header(line);
  std::string magic, dim, tv, tt, te;
  header >> magic >> dim >> tv >> tt >> te;
  if (magic != "mesh" || dim != "2d") throw MeshError("not a 2d mesh file");
  const int nv = parse_count(tv, 'v');
  const int nt = parse_count(tt, 't');
  const int nb = parse_count(te, 'e');
  if (nv < 0 || nt < 0 || nb < 0) throw MeshError("negative count in mesh header");

  MeshInput in;
  in.vertices.resize(nv);
  for (auto &p : in.vertices)
    if (!(is >> p.x >> p.y)) throw MeshError("truncated vertex block");
  in.triangles.resize(nt);
  for (auto &t : in.triangles)
    if (!(is >> t.v[0] >> t.v[1] >> t.v[2] >> t.subdomain)) throw MeshError("truncated triangle block");
  in.boundary_edges.resize(nb);
  for (auto &b : in.boundary_edges) {
    std::string tag;
    if (!(is >> b.v0 >> b.v1 >> tag)) throw MeshError("truncated boundary block");
    if (tag == "D") b.tag = BoundaryTag::dirichlet;
    else if (tag == "N") b.tag = BoundaryTag::neumann;
    else throw MeshError("unknown boundary tag '" + tag + "'");
  }
  return in;
}

Mesh read_mesh(std::istream &is, const AlphaMap &alpha) {
  MeshInput in = read_mesh_input(is);
  in.alpha = alpha;
  return build_mesh(in);
}

} // namespace ncafem
