#include "ncafem/estimator.hpp"

#include <algorithm>
#include <limits>

namespace ncafem {

namespace {

// Positions visited going from i to j around the star; dir = +1 (counter-clockwise) or -1.
std::vector<int> walk(int i, int j, int dir, int n) {
  std::vector<int> out{i};
  while (i != j) {
    i = ((i + dir) % n + n) % n;
    out.push_back(i);
  }
  return out;
}

double path_cost(const std::vector<int> &path, const std::vector<double> &a, int from) {
  double c = 1.0;
  for (int p : path) c = std::max(c, a[from] / a[p]);
  return c;
}

struct Best {
  double c = std::numeric_limits<double>::infinity();
  std::vector<int> path;
};

// Cheapest admissible path from position i to position j.
Best best_path(int i, int j, const VertexStar &star, const std::vector<double> &a) {
  const int n = static_cast<int>(a.size());
  Best best;
  auto consider = [&](std::vector<int> p) {
    const double c = path_cost(p, a, i);
    if (c < best.c) best = {c, std::move(p)};
  };
  if (star.cyclic) {
    consider(walk(i, j, +1, n));
    consider(walk(i, j, -1, n));
  } else {
    consider(walk(i, j, j >= i ? +1 : -1, n));
  }
  return best;
}

VertexPatch classify_vertex(const Mesh &mesh, int z) {
  const VertexStar star = vertex_star(mesh, z);
  const int n = static_cast<int>(star.elements.size());
  VertexPatch vp;
  vp.vertex = z;
  vp.elements = star.elements;
  std::vector<double> a(n);
  for (int i = 0; i < n; ++i) a[i] = mesh.alpha(star.elements[i]);
  const double amax = *std::max_element(a.begin(), a.end());
  vp.interface = std::any_of(a.begin(), a.end(), [&](double x) { return x != a[0]; });

  std::vector<char> dend(n, 0);
  if (!star.cyclic) {
    dend[0] = mesh.edge(star.edges.front()).tag == BoundaryTag::dirichlet;
    dend[n - 1] = dend[n - 1] || mesh.edge(star.edges.back()).tag == BoundaryTag::dirichlet;
  }
  const bool dirichlet = std::any_of(dend.begin(), dend.end(), [](char c) { return c != 0; });

  std::vector<int> maxpos;
  for (int i = 0; i < n; ++i)
    if (a[i] == amax) maxpos.push_back(i);
  std::sort(maxpos.begin(), maxpos.end(),
            [&](int p, int q) { return star.elements[p] < star.elements[q]; });

  vp.quasi_monotone = !vp.interface || star_quasi_monotone(star, a, dend);

  vp.c.assign(n, 1.0);
  vp.path.assign(n, {});
  if (dirichlet) {
    vp.anchor = star.elements[maxpos.front()];
    for (int i = 0; i < n; ++i) {
      Best best;
      for (int j = 0; j < n; ++j) {
        if (!dend[j]) continue;
        Best b = best_path(i, j, star, a);
        if (b.c < best.c) best = std::move(b);
      }
      vp.c[i] = best.c;
      for (int p : best.path) vp.path[i].push_back(star.elements[p]);
    }
    return vp;
  }

  double best_score = std::numeric_limits<double>::infinity();
  for (int j : maxpos) {
    std::vector<Best> paths(n);
    double score = 1.0;
    for (int i = 0; i < n; ++i) {
      paths[i] = best_path(i, j, star, a);
      score = std::max(score, paths[i].c);
    }
    if (score < best_score) {
      best_score = score;
      vp.anchor = star.elements[j];
      for (int i = 0; i < n; ++i) {
        vp.c[i] = paths[i].c;
        vp.path[i].clear();
        for (int p : paths[i].path) vp.path[i].push_back(star.elements[p]);
      }
    }
  }
  return vp;
}

} // namespace

bool star_quasi_monotone(const VertexStar &star, const std::vector<double> &a, const std::vector<char> &dend) {
  const int n = static_cast<int>(a.size());
  const double amax = *std::max_element(a.begin(), a.end());
  const bool dirichlet = std::any_of(dend.begin(), dend.end(), [](char c) { return c != 0; });
  for (int i = 0; i < n; ++i) {
    // edge-connected component of i in {alpha >= alpha_i}
    std::vector<char> in(n, 0);
    std::vector<int> stack{i};
    in[i] = 1;
    while (!stack.empty()) {
      const int p = stack.back();
      stack.pop_back();
      for (int d : {-1, 1}) {
        int q = p + d;
        if (star.cyclic)
          q = (q + n) % n;
        else if (q < 0 || q >= n)
          continue;
        if (!in[q] && a[q] >= a[i]) {
          in[q] = 1;
          stack.push_back(q);
        }
      }
    }
    bool ok = false;
    if (dirichlet) {
      for (int q = 0; q < n; ++q) ok = ok || (in[q] && dend[q]);
    } else {
      ok = true;
      for (int q = 0; q < n; ++q) ok = ok && (a[q] != amax || in[q]);
    }
    if (!ok) return false;
  }
  return true;
}

double PatchClassification::max_c() const {
  double m = 1.0;
  for (const auto &p : patches)
    for (double c : p.c) m = std::max(m, c);
  return m;
}

PatchClassification classify_patches(const Mesh &mesh, Exec exec) {
  PatchClassification cls;
  cls.mesh_id = mesh.id();
  cls.patches.resize(mesh.num_vertices());
  for_each_index(exec, mesh.num_vertices(), [&](int z) { cls.patches[z] = classify_vertex(mesh, z); });
  cls.in_nm.assign(mesh.num_vertices(), 0);
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    if (!cls.patches[z].quasi_monotone) {
      cls.nonmonotone.push_back(z);
      cls.in_nm[z] = 1;
    }
  }
  return cls;
}

} // namespace ncafem
