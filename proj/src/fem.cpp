#include "ncafem/fem.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <sstream>

namespace ncafem {

namespace {

Vec2 centroid(const TriangleCoords &t) { return (1.0 / 3.0) * (t[0] + t[1] + t[2]); }

double ordered_sum(const std::vector<double> &v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Integral over element k, graded toward a singular vertex when present.
template <class F>
double element_integral(const ProblemSpec &spec, const TriangleCoords &t, int levels, F &&f) {
  const int sv = singular_vertex(spec, t);
  if (sv >= 0 && levels > 0) return graded_tri_integrate(f, t, sv, levels, kErrorDegree);
  return integrate(tri_rule(kErrorDegree), t, f);
}

} // namespace

std::array<Vec2, 3> barycentric_gradients(const TriangleCoords &t) {
  const double two_area = 2.0 * signed_area(t[0], t[1], t[2]);
  std::array<Vec2, 3> g;
  for (int i = 0; i < 3; ++i) {
    const Vec2 &a = t[(i + 1) % 3], &b = t[(i + 2) % 3];
    g[i] = Vec2{a.y - b.y, b.x - a.x} * (1.0 / two_area);
  }
  return g;
}

std::array<double, 3> barycentric(const TriangleCoords &t, const Vec2 &p) {
  const double area = signed_area(t[0], t[1], t[2]);
  return {signed_area(p, t[1], t[2]) / area, signed_area(t[0], p, t[2]) / area,
          signed_area(t[0], t[1], p) / area};
}

LocalMatrix local_stiffness(const TriangleCoords &t, double alpha) {
  const auto g = barycentric_gradients(t);
  const double scale = 4.0 * alpha * std::abs(signed_area(t[0], t[1], t[2]));
  LocalMatrix m{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = scale * dot(g[i], g[j]);
  return m;
}

Vec2 cr_gradient(const Mesh &mesh, int k, std::span<const double> dofs) {
  const auto g = barycentric_gradients(mesh.coords(k));
  const auto &ed = mesh.element(k).edges;
  return -2.0 * (dofs[ed[0]] * g[0] + dofs[ed[1]] * g[1] + dofs[ed[2]] * g[2]);
}

std::vector<Vec2> cr_gradients(const Mesh &mesh, std::span<const double> dofs, Exec exec) {
  std::vector<Vec2> out(mesh.num_elements());
  for_each_index(exec, mesh.num_elements(), [&](int k) { out[k] = cr_gradient(mesh, k, dofs); });
  return out;
}

double cr_value(const Mesh &mesh, int k, std::span<const double> dofs, const Vec2 &p) {
  const auto l = barycentric(mesh.coords(k), p);
  const auto &ed = mesh.element(k).edges;
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += dofs[ed[i]] * (1.0 - 2.0 * l[i]);
  return s;
}

std::array<double, 3> cr_vertex_values(const Mesh &mesh, int k, std::span<const double> dofs) {
  const auto &ed = mesh.element(k).edges;
  const double sum = dofs[ed[0]] + dofs[ed[1]] + dofs[ed[2]];
  return {sum - 2.0 * dofs[ed[0]], sum - 2.0 * dofs[ed[1]], sum - 2.0 * dofs[ed[2]]};
}

void check_same_mesh(const Mesh &mesh, const CrSolution &u) {
  if (u.mesh_id != mesh.id() || static_cast<int>(u.values.size()) != mesh.num_edges())
    throw std::invalid_argument("mesh/solution mismatch");
}

Eigen::SparseMatrix<double> assemble_full_stiffness(const Mesh &mesh, Exec exec) {
  const int ne = mesh.num_elements();
  std::vector<LocalMatrix> local(ne);
  for_each_index(exec, ne, [&](int k) { local[k] = local_stiffness(mesh.coords(k), mesh.alpha(k)); });
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * static_cast<std::size_t>(ne));
  for (int k = 0; k < ne; ++k) {
    const auto &ed = mesh.element(k).edges;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.emplace_back(ed[i], ed[j], local[k][i][j]);
  }
  Eigen::SparseMatrix<double> A(mesh.num_edges(), mesh.num_edges());
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

SparseSystem assemble(const Mesh &mesh, const ProblemSpec &spec, Exec exec) {
  for (const auto &[sd, a] : mesh.alpha_map()) {
    (void)a;
    spec.alpha(sd); // throws for a missing coefficient
  }
  const int ne = mesh.num_elements();
  const int nedge = mesh.num_edges();
  SparseSystem sys;
  sys.mesh_id = mesh.id();
  sys.edge_to_free.assign(nedge, -1);
  sys.edge_values.assign(nedge, 0.0);
  for (int e = 0; e < nedge; ++e) {
    const Edge &ed = mesh.edge(e);
    if (ed.tag == BoundaryTag::dirichlet) {
      sys.edge_values[e] = spec.g_dirichlet(ed.midpoint);
    } else {
      sys.edge_to_free[e] = static_cast<int>(sys.free_to_edge.size());
      sys.free_to_edge.push_back(e);
    }
  }

  std::vector<LocalMatrix> local(ne);
  std::vector<std::array<double, 3>> load(ne);
  const TriRule &rule = tri_rule(kLoadDegree);
  const EdgeRule &erule = edge_rule(kLoadDegree);
  for_each_index(exec, ne, [&](int k) {
    const auto t = mesh.coords(k);
    const Element &el = mesh.element(k);
    local[k] = local_stiffness(t, mesh.alpha(k));
    load[k] = {0.0, 0.0, 0.0};
    if (!spec.f_is_zero) {
      for (int i = 0; i < 3; ++i)
        load[k][i] = integrate(rule, t, [&](const Vec2 &p) {
          return spec.f(p, el.subdomain) * (1.0 - 2.0 * barycentric(t, p)[i]);
        });
    }
    for (int li = 0; li < 3; ++li) {
      const Edge &ed = mesh.edge(el.edges[li]);
      if (ed.tag != BoundaryTag::neumann) continue;
      const Vec2 &a = mesh.vertex(ed.v[0]), &b = mesh.vertex(ed.v[1]);
      for (int i = 0; i < 3; ++i)
        load[k][i] += integrate(erule, a, b, [&](const Vec2 &p) {
          return spec.g_neumann(p) * (1.0 - 2.0 * barycentric(t, p)[i]);
        });
    }
  });

  const int nf = static_cast<int>(sys.free_to_edge.size());
  sys.b = Eigen::VectorXd::Zero(nf);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * static_cast<std::size_t>(ne));
  for (int k = 0; k < ne; ++k) {
    const auto &ed = mesh.element(k).edges;
    for (int i = 0; i < 3; ++i) {
      const int fi = sys.edge_to_free[ed[i]];
      if (fi < 0) continue;
      sys.b[fi] += load[k][i];
      for (int j = 0; j < 3; ++j) {
        const int fj = sys.edge_to_free[ed[j]];
        if (fj >= 0)
          trip.emplace_back(fi, fj, local[k][i][j]);
        else
          sys.b[fi] -= local[k][i][j] * sys.edge_values[ed[j]];
      }
    }
  }
  sys.A.resize(nf, nf);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

CrSolution solve(const SparseSystem &sys, double tol) {
  SolveOptions o;
  o.tol = tol;
  return solve(sys, o);
}

CrSolution solve(const SparseSystem &sys, const SolveOptions &options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
  const int nf = static_cast<int>(sys.b.size());
  CrSolution out;
  out.mesh_id = sys.mesh_id;
  out.values = sys.edge_values;
  if (nf == 0) return out;

  Eigen::VectorXd x;
  const double bnorm = sys.b.norm();
  auto rel_residual = [&](const Eigen::VectorXd &y) {
    const double r = (sys.b - sys.A * y).norm();
    return bnorm > 0.0 ? r / bnorm : r;
  };
  if (!options.force_iterative && nf <= options.direct_limit) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(sys.A);
    if (llt.info() != Eigen::Success) throw SolveError("Cholesky factorization failed (matrix not positive definite)");
    x = llt.solve(sys.b);
    // a few steps of iterative refinement for badly scaled systems
    for (int it = 0; it < 3 && rel_residual(x) > options.tol; ++it) x += llt.solve(sys.b - sys.A * x);
  } else {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setMaxIterations(static_cast<int>(std::ceil(20.0 * std::sqrt(static_cast<double>(nf)))));
    cg.setTolerance(options.tol);
    cg.compute(sys.A);
    x = cg.solve(sys.b);
    out.iterations = static_cast<int>(cg.iterations());
  }
  out.residual = rel_residual(x);
  if (!std::isfinite(out.residual) || out.residual > options.tol) {
    std::ostringstream msg;
    msg << "solver did not converge: relative residual " << out.residual << " after " << out.iterations
        << " iterations";
    throw SolveError(msg.str());
  }
  for (int i = 0; i < nf; ++i) out.values[sys.free_to_edge[i]] = x[i];
  return out;
}

double bilinear_form(const Mesh &mesh, std::span<const double> v, std::span<const double> w) {
  double s = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k)
    s += mesh.alpha(k) * mesh.area(k) * dot(cr_gradient(mesh, k, v), cr_gradient(mesh, k, w));
  return s;
}

double load_functional(const Mesh &mesh, const ProblemSpec &spec, std::span<const double> v) {
  const TriRule &rule = tri_rule(kLoadDegree);
  const EdgeRule &erule = edge_rule(kLoadDegree);
  double s = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const int sd = mesh.element(k).subdomain;
    s += integrate(rule, mesh.coords(k), [&](const Vec2 &p) { return spec.f(p, sd) * cr_value(mesh, k, v, p); });
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edge(e);
    if (ed.tag != BoundaryTag::neumann) continue;
    s += integrate(erule, mesh.vertex(ed.v[0]), mesh.vertex(ed.v[1]),
                   [&](const Vec2 &p) { return spec.g_neumann(p) * cr_value(mesh, ed.plus, v, p); });
  }
  return s;
}

double broken_energy_norm(const Mesh &mesh, std::span<const double> v) {
  double s = 0.0;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const Vec2 g = cr_gradient(mesh, k, v);
    s += mesh.alpha(k) * mesh.area(k) * dot(g, g);
  }
  return std::sqrt(s);
}

double broken_energy_norm(const Mesh &mesh, const ProblemSpec &spec, const GradientField &grad, int grading_levels,
                          Exec exec) {
  std::vector<double> part(mesh.num_elements());
  for_each_index(exec, mesh.num_elements(), [&](int k) {
    const auto t = mesh.coords(k);
    const Vec2 side = centroid(t);
    part[k] = mesh.alpha(k) * element_integral(spec, t, grading_levels, [&](const Vec2 &p) {
                const Vec2 g = grad(p, side);
                return dot(g, g);
              });
  });
  return std::sqrt(ordered_sum(part));
}

TrueError true_error(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h, int grading_levels,
                     Exec exec) {
  if (!spec.exact) throw ProblemError("problem '" + spec.name + "' has no exact solution");
  check_same_mesh(mesh, u_h);
  const auto grads = cr_gradients(mesh, u_h.values, exec);
  const auto &ex = *spec.exact;
  std::vector<double> part(mesh.num_elements());
  for_each_index(exec, mesh.num_elements(), [&](int k) {
    const auto t = mesh.coords(k);
    const Vec2 side = centroid(t);
    part[k] = mesh.alpha(k) * element_integral(spec, t, grading_levels, [&](const Vec2 &p) {
                const Vec2 d = ex.gradient(p, side) - grads[k];
                return dot(d, d);
              });
  });
  TrueError out;
  out.error = std::sqrt(ordered_sum(part));
  out.energy_norm = ex.energy_norm > 0.0 ? ex.energy_norm
                                         : broken_energy_norm(mesh, spec, ex.gradient, grading_levels, exec);
  out.rel_err = out.energy_norm > 0.0 ? out.error / out.energy_norm : out.error;
  return out;
}

double flux_jump(const Mesh &mesh, const ProblemSpec &spec, std::span<const Vec2> grads, int e, const Vec2 &p) {
  const Edge &ed = mesh.edge(e);
  const Vec2 n = mesh.normal(e);
  switch (ed.tag) {
  case BoundaryTag::dirichlet: return 0.0;
  case BoundaryTag::neumann: return mesh.alpha(ed.plus) * dot(grads[ed.plus], n) - spec.g_neumann(p);
  default: return dot(mesh.alpha(ed.plus) * grads[ed.plus] - mesh.alpha(ed.minus) * grads[ed.minus], n);
  }
}

RepresentationTerms error_representation(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                                         std::span<const double> e_h, int grading_levels) {
  if (!spec.exact) throw ProblemError("problem '" + spec.name + "' has no exact solution");
  check_same_mesh(mesh, u_h);
  if (static_cast<int>(e_h.size()) != mesh.num_edges()) throw std::invalid_argument("mesh/solution mismatch");
  const auto &ex = *spec.exact;
  const auto grads = cr_gradients(mesh, u_h.values, Exec::serial);
  std::span<const double> uh = u_h.values;

  auto side_of = [&](int k) { return centroid(mesh.coords(k)); };
  // (E - E_h)|_K at p
  auto diff = [&](int k, const Vec2 &p) {
    return ex.value(p, side_of(k)) - cr_value(mesh, k, uh, p) - cr_value(mesh, k, e_h, p);
  };

  RepresentationTerms r;
  for (int k = 0; k < mesh.num_elements(); ++k) {
    const auto t = mesh.coords(k);
    const Vec2 side = side_of(k);
    const int sd = mesh.element(k).subdomain;
    r.lhs += mesh.alpha(k) * element_integral(spec, t, grading_levels, [&](const Vec2 &p) {
               const Vec2 d = ex.gradient(p, side) - grads[k];
               return dot(d, d);
             });
    r.residual += element_integral(spec, t, grading_levels, [&](const Vec2 &p) { return spec.f(p, sd) * diff(k, p); });
  }

  const EdgeRule &erule = edge_rule(kErrorDegree);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge &ed = mesh.edge(e);
    const Vec2 &a = mesh.vertex(ed.v[0]), &b = mesh.vertex(ed.v[1]);
    const Vec2 n = mesh.normal(e);
    const int kp = ed.plus, km = ed.minus;
    auto flux_e = [&](int k, const Vec2 &p) { return mesh.alpha(k) * dot(ex.gradient(p, side_of(k)) - grads[k], n); };
    switch (ed.tag) {
    case BoundaryTag::interior:
      r.flux += integrate(erule, a, b, [&](const Vec2 &p) {
        return flux_jump(mesh, spec, grads, e, p) * 0.5 * (diff(kp, p) + diff(km, p));
      });
      r.jump += integrate(erule, a, b, [&](const Vec2 &p) {
        return 0.5 * (flux_e(kp, p) + flux_e(km, p)) * (cr_value(mesh, kp, uh, p) - cr_value(mesh, km, uh, p));
      });
      break;
    case BoundaryTag::neumann:
      r.flux += integrate(erule, a, b, [&](const Vec2 &p) { return flux_jump(mesh, spec, grads, e, p) * diff(kp, p); });
      break;
    case BoundaryTag::dirichlet:
      r.jump += integrate(erule, a, b, [&](const Vec2 &p) {
        return flux_e(kp, p) * (cr_value(mesh, kp, uh, p) - spec.g_dirichlet(p));
      });
      break;
    }
  }
  return r;
}

double error_representation_residual(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                                     std::span<const double> e_h, int grading_levels) {
  return std::abs(error_representation(mesh, spec, u_h, e_h, grading_levels).defect());
}

} // namespace ncafem
