#pragma once

#include "ncafem/mesh.hpp"

namespace ncafem {

struct BuildOptions {
  bool longest_edge_first = false; ///< rotate each triangle so its longest edge is (v0, v1)
  bool check_geometry = true;      ///< hanging nodes and interface polygons
  std::vector<int> parents;        ///< genealogy, empty for initial meshes
};

class MeshBuilder {
public:
  static Mesh make(MeshInput input, BuildOptions options);
  static void assign_orientation(Mesh &mesh);
};

inline std::uint64_t pair_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

} // namespace ncafem
