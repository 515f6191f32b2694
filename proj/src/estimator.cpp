#include "ncafem/estimator.hpp"

#include "ncafem/quad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ncafem {

namespace {

struct EdgeJumps {
  double jsigma_sq = 0.0; // ||j_sigma||^2
  double jsigma_mean = 0.0;
  double ju_sq = 0.0;   // ||j_u||^2
  double jtau_sq = 0.0; // ||j_tau||^2
  double ja = 0.0, jb = 0.0, jm = 0.0; // j_u at v[0], v[1] and the midpoint
};

double trace_at(const Mesh &mesh, int k, std::span<const double> dofs, int vertex) {
  return cr_vertex_values(mesh, k, dofs)[mesh.local_vertex(k, vertex)];
}

EdgeJumps edge_jumps(const Mesh &mesh, const ProblemSpec &spec, std::span<const double> dofs,
                     std::span<const Vec2> grads, int e) {
  const Edge &ed = mesh.edge(e);
  const double h = mesh.edge_length(e);
  const Vec2 &a = mesh.vertex(ed.v[0]), &b = mesh.vertex(ed.v[1]);
  EdgeJumps j;
  switch (ed.tag) {
  case BoundaryTag::interior: {
    const double s = flux_jump(mesh, spec, grads, e, ed.midpoint);
    j.jsigma_sq = s * s * h;
    j.jsigma_mean = s;
    j.ja = trace_at(mesh, ed.plus, dofs, ed.v[0]) - trace_at(mesh, ed.minus, dofs, ed.v[0]);
    j.jb = trace_at(mesh, ed.plus, dofs, ed.v[1]) - trace_at(mesh, ed.minus, dofs, ed.v[1]);
    j.jm = 0.0;
    const double t = dot(grads[ed.plus] - grads[ed.minus], mesh.tangent(e));
    j.jtau_sq = t * t * h;
    break;
  }
  case BoundaryTag::neumann: {
    const EdgeRule &rule = edge_rule(kLoadDegree * 2);
    j.jsigma_sq = integrate(rule, a, b, [&](const Vec2 &p) {
      const double s = flux_jump(mesh, spec, grads, e, p);
      return s * s;
    });
    j.jsigma_mean = integrate(rule, a, b, [&](const Vec2 &p) { return flux_jump(mesh, spec, grads, e, p); }) / h;
    break;
  }
  case BoundaryTag::dirichlet: {
    // u_h minus the linear interpolant of g_D on the edge
    const double ga = spec.g_dirichlet(a), gb = spec.g_dirichlet(b);
    j.ja = trace_at(mesh, ed.plus, dofs, ed.v[0]) - ga;
    j.jb = trace_at(mesh, ed.plus, dofs, ed.v[1]) - gb;
    j.jm = dofs[e] - 0.5 * (ga + gb);
    const double t = (j.jb - j.ja) / h;
    j.jtau_sq = t * t * h;
    break;
  }
  }
  j.ju_sq = linear_sq_norm(h, j.ja, j.jb);
  return j;
}

double total(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

} // namespace

IndicatorReport standard_indicators(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h, Exec exec) {
  check_same_mesh(mesh, u_h);
  const auto grads = cr_gradients(mesh, u_h.values, exec);
  std::span<const double> dofs = u_h.values;

  std::vector<EdgeJumps> jumps(mesh.num_edges());
  for_each_index(exec, mesh.num_edges(), [&](int e) { jumps[e] = edge_jumps(mesh, spec, dofs, grads, e); });

  const int ne = mesh.num_elements();
  IndicatorReport r;
  r.mesh_id = mesh.id();
  for (auto *v : {&r.eta_rf, &r.eta_jsigma, &r.eta_ju, &r.eta_ju_tilde, &r.eta_ju_hat, &r.eta_jtau, &r.eta,
                  &r.eta_tilde, &r.eta_tangential})
    v->assign(ne, 0.0);
  r.edge_jsigma.resize(mesh.num_edges());
  r.edge_ju_norm.resize(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    r.edge_jsigma[e] = jumps[e].jsigma_mean;
    r.edge_ju_norm[e] = std::sqrt(jumps[e].ju_sq);
  }

  const TriRule &rule = tri_rule(kErrorDegree);
  for_each_index(exec, ne, [&](int k) {
    const Element &el = mesh.element(k);
    const double ak = mesh.alpha(k);
    const double hk = mesh.diameter(k);
    double rf = 0.0;
    if (!spec.f_is_zero) {
      const double f2 = integrate(rule, mesh.coords(k), [&](const Vec2 &p) {
        const double f = spec.f(p, el.subdomain);
        return f * f;
      });
      rf = hk * hk / ak * f2;
    }
    double js = 0.0, ju = 0.0, jt = 0.0;
    for (int e : el.edges) {
      const Edge &ed = mesh.edge(e);
      const double he = mesh.edge_length(e);
      const EdgeJumps &j = jumps[e];
      switch (ed.tag) {
      case BoundaryTag::interior: {
        const double ap = mesh.alpha(ed.plus), am = mesh.alpha(ed.minus);
        js += he / (2.0 * ap) * j.jsigma_sq;
        ju += am / (2.0 * he) * j.ju_sq;
        jt += am * he / 2.0 * j.jtau_sq;
        break;
      }
      case BoundaryTag::neumann: js += he / ak * j.jsigma_sq; break;
      case BoundaryTag::dirichlet:
        ju += ak / he * j.ju_sq;
        jt += ak * he * j.jtau_sq;
        break;
      }
    }
    r.eta_rf[k] = std::sqrt(rf);
    r.eta_jsigma[k] = std::sqrt(js);
    r.eta_ju[k] = std::sqrt(ju);
    r.eta_ju_tilde[k] = r.eta_ju[k];
    r.eta_jtau[k] = std::sqrt(jt);
    r.eta[k] = std::sqrt(rf + js + ju);
    r.eta_tilde[k] = r.eta[k];
    r.eta_tangential[k] = std::sqrt(rf + js + jt);
  });
  r.total_eta = total(r.eta);
  r.total_eta_tilde = r.total_eta;
  r.total_eta_tangential = total(r.eta_tangential);
  r.total_eta_ju_tilde = total(r.eta_ju);
  return r;
}

std::vector<double> tangential_indicator(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                                         Exec exec) {
  return standard_indicators(mesh, spec, u_h, exec).eta_jtau;
}

std::vector<double> ihalf_interpolate(const Mesh &mesh, const HalfMesh &half, const ProblemSpec &spec,
                                      const CrSolution &u_h, const PatchClassification &cls) {
  check_same_mesh(mesh, u_h);
  if (cls.mesh_id != mesh.id()) throw std::invalid_argument("classification belongs to another mesh");
  std::vector<double> out(half.mesh.num_vertices(), 0.0);
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    if (mesh.vertex_kind(z) == VertexKind::dirichlet)
      out[z] = spec.g_dirichlet(mesh.vertex(z));
    else
      out[z] = trace_at(mesh, cls.patches[z].anchor, u_h.values, z);
  }
  for (int e = 0; e < mesh.num_edges(); ++e) out[half.midpoint_vertex(e)] = u_h.values[e];
  return out;
}

void modified_indicators(const Mesh &mesh, const HalfMesh &half, const ProblemSpec &spec, const CrSolution &u_h,
                         const PatchClassification &cls, IndicatorReport &r, Exec exec) {
  if (r.mesh_id != mesh.id()) throw std::invalid_argument("indicator report belongs to another mesh");
  const auto ival = ihalf_interpolate(mesh, half, spec, u_h, cls);
  const auto grads = cr_gradients(mesh, u_h.values, exec);
  std::span<const double> dofs = u_h.values;

  for_each_index(exec, mesh.num_elements(), [&](int k) {
    const Element &el = mesh.element(k);
    const double ak = mesh.alpha(k);
    const double hk = mesh.diameter(k);
    const auto trace = cr_vertex_values(mesh, k, dofs);
    // half-lengths of the two edges of K at local vertex i
    auto corner_len = [&](int i) {
      return 0.5 * (mesh.edge_length(el.edges[(i + 1) % 3]) + mesh.edge_length(el.edges[(i + 2) % 3]));
    };
    double hat = 0.0;
    bool touches = false;
    for (int i = 0; i < 3; ++i) {
      const double d = ival[el.v[i]] - trace[i];
      hat += d * d * corner_len(i) / 3.0;
      touches = touches || cls.in_nm[el.v[i]];
    }
    r.eta_ju_hat[k] = std::sqrt(ak / hk * hat);
    if (!touches) return;

    double ju = 0.0;
    for (int i = 0; i < 3; ++i) {
      const int z = el.v[i];
      if (cls.in_nm[z]) {
        const double d = ival[z] - trace[i];
        ju += ak / (2.0 * hk) * d * d * corner_len(i) / 3.0;
        continue;
      }
      for (int e : {el.edges[(i + 1) % 3], el.edges[(i + 2) % 3]}) {
        const Edge &ed = mesh.edge(e);
        if (ed.tag == BoundaryTag::neumann) continue;
        const EdgeJumps j = edge_jumps(mesh, spec, dofs, grads, e);
        const double hh = 0.5 * mesh.edge_length(e);
        const double jz = ed.v[0] == z ? j.ja : j.jb;
        const double norm_sq = linear_sq_norm(hh, jz, j.jm);
        if (ed.tag == BoundaryTag::interior)
          ju += mesh.alpha(ed.minus) / (4.0 * hh) * norm_sq;
        else
          ju += ak / (2.0 * hh) * norm_sq;
      }
    }
    r.eta_ju_tilde[k] = std::sqrt(ju);
    const double base = r.eta_rf[k] * r.eta_rf[k] + r.eta_jsigma[k] * r.eta_jsigma[k];
    r.eta_tilde[k] = std::sqrt(base + ju);
  });
  r.nonmonotone = cls.nonmonotone;
  r.has_modified = true;
  r.total_eta_tilde = total(r.eta_tilde);
  r.total_eta_ju_hat = total(r.eta_ju_hat);
  r.total_eta_ju_tilde = total(r.eta_ju_tilde);
}

IndicatorReport estimate(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h, Exec exec) {
  IndicatorReport r = standard_indicators(mesh, spec, u_h, exec);
  const PatchClassification cls = classify_patches(mesh, exec);
  const HalfMesh half = half_refine(mesh);
  modified_indicators(mesh, half, spec, u_h, cls, r, exec);
  return r;
}

CkzReport c_kz_bound_check(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                           const PatchClassification &cls) {
  check_same_mesh(mesh, u_h);
  const auto grads = cr_gradients(mesh, u_h.values, Exec::serial);
  std::span<const double> dofs = u_h.values;
  CkzReport rep;
  for (int z : cls.nonmonotone) {
    const VertexPatch &vp = cls.patches[z];
    // right-hand side sum over the half edges at z
    double jumps = 0.0;
    for (int e : mesh.vertex_edges(z)) {
      const Edge &ed = mesh.edge(e);
      if (ed.tag == BoundaryTag::neumann) continue;
      const EdgeJumps j = edge_jumps(mesh, spec, dofs, grads, e);
      const double hh = 0.5 * mesh.edge_length(e);
      const double jz = ed.v[0] == z ? j.ja : j.jb;
      const double am = ed.tag == BoundaryTag::interior ? mesh.alpha(ed.minus) : mesh.alpha(ed.plus);
      jumps += am / hh * linear_sq_norm(hh, jz, j.jm);
    }
    const double iz = mesh.vertex_kind(z) == VertexKind::dirichlet ? spec.g_dirichlet(mesh.vertex(z))
                                                                   : trace_at(mesh, vp.anchor, dofs, z);
    for (std::size_t i = 0; i < vp.elements.size(); ++i) {
      const int k = vp.elements[i];
      const Element &el = mesh.element(k);
      const int li = mesh.local_vertex(k, z);
      const double d = iz - trace_at(mesh, k, dofs, z);
      const double len =
          0.5 * (mesh.edge_length(el.edges[(li + 1) % 3]) + mesh.edge_length(el.edges[(li + 2) % 3]));
      CkzEntry entry{k, z, vp.c[i], mesh.alpha(k) / mesh.diameter(k) * d * d * len / 3.0,
                     2.0 * vp.c[i] * jumps};
      if (entry.rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, entry.lhs / entry.rhs);
      if (entry.lhs > entry.rhs * (1.0 + 1e-12) + 1e-300) ++rep.violations;
      rep.entries.push_back(entry);
    }
  }
  return rep;
}

std::vector<double> clement_interpolate(const Mesh &mesh, const ElementFunction &v, bool dirichlet_zero) {
  const TriRule &rule = tri_rule(kErrorDegree);
  std::vector<double> mean(mesh.num_elements());
  for (int k = 0; k < mesh.num_elements(); ++k)
    mean[k] = integrate(rule, mesh.coords(k), [&](const Vec2 &p) { return v(p, k); }) / mesh.area(k);
  std::vector<double> out(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edge(e);
    out[e] = dirichlet_zero && ed.tag == BoundaryTag::dirichlet ? 0.0 : mean[ed.plus];
  }
  return out;
}

void write_indicators_csv(std::ostream &os, const IndicatorReport &r) {
  os << "# nonmonotone_vertices:";
  for (int z : r.nonmonotone) os << ' ' << z;
  os << '\n';
  os << "element,eta_rf,eta_jsigma,eta_ju,eta_ju_tilde,eta,eta_tilde\n";
  char buf[512];
  for (int k = 0; k < r.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, r.eta_rf[k], r.eta_jsigma[k],
                  r.eta_ju[k], r.eta_ju_tilde[k], r.eta[k], r.eta_tilde[k]);
    os << buf;
  }
}

} // namespace ncafem
