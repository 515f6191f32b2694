#pragma once

#include "ncafem/mesh.hpp"
#include "ncafem/parallel.hpp"
#include "ncafem/problems.hpp"
#include "ncafem/quad.hpp"

#include <Eigen/SparseCore>

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ncafem {

class SolveError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Crouzeix-Raviart function: one value per edge midpoint.
struct CrSolution {
  std::uint64_t mesh_id = 0;
  std::vector<double> values; ///< indexed by edge id
  int iterations = 0;         ///< solver iterations (0 for the direct solver)
  double residual = 0.0;      ///< relative algebraic residual of the solve
};

/// Stiffness and load over the free (non-Dirichlet) edges.
struct SparseSystem {
  std::uint64_t mesh_id = 0;
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd b;
  std::vector<int> free_to_edge;
  std::vector<int> edge_to_free;    ///< -1 on Dirichlet edges
  std::vector<double> edge_values;  ///< g_D(m_e) on Dirichlet edges, 0 elsewhere
};

using LocalMatrix = std::array<std::array<double, 3>, 3>;

/// Gradients of the barycentric coordinates of t.
std::array<Vec2, 3> barycentric_gradients(const TriangleCoords &t);
std::array<double, 3> barycentric(const TriangleCoords &t, const Vec2 &p);

/// (alpha grad phi_i, grad phi_j)_K for the local edge basis phi_i = 1 - 2 lambda_i.
LocalMatrix local_stiffness(const TriangleCoords &t, double alpha);

/// Constant gradient of a CR function on element k.
Vec2 cr_gradient(const Mesh &mesh, int k, std::span<const double> dofs);
std::vector<Vec2> cr_gradients(const Mesh &mesh, std::span<const double> dofs, Exec exec = Exec::parallel);
/// Value of the restriction to element k at p.
double cr_value(const Mesh &mesh, int k, std::span<const double> dofs, const Vec2 &p);
/// Values of the restriction to element k at its three vertices.
std::array<double, 3> cr_vertex_values(const Mesh &mesh, int k, std::span<const double> dofs);

SparseSystem assemble(const Mesh &mesh, const ProblemSpec &spec, Exec exec = Exec::parallel);
/// Stiffness over all edges with no boundary conditions applied.
Eigen::SparseMatrix<double> assemble_full_stiffness(const Mesh &mesh, Exec exec = Exec::parallel);

struct SolveOptions {
  double tol = 1e-10;
  int direct_limit = 200000; ///< free dofs above which CG is used
  bool force_iterative = false;
};

CrSolution solve(const SparseSystem &system, const SolveOptions &options = {});
CrSolution solve(const SparseSystem &system, double tol);

/// a_h(v, w) and f(v) (load plus Neumann data).
double bilinear_form(const Mesh &mesh, std::span<const double> v, std::span<const double> w);
double load_functional(const Mesh &mesh, const ProblemSpec &spec, std::span<const double> v);

/// Broken energy norm of a CR function (closed form).
double broken_energy_norm(const Mesh &mesh, std::span<const double> v);

using GradientField = std::function<Vec2(const Vec2 &p, const Vec2 &side)>;

/// Broken energy norm of a general field by quadrature, graded near spec's singular points.
double broken_energy_norm(const Mesh &mesh, const ProblemSpec &spec, const GradientField &grad,
                          int grading_levels = kDefaultGradingLevels, Exec exec = Exec::parallel);

struct TrueError {
  double error = 0.0;       ///< |||u - u_h|||
  double rel_err = 0.0;     ///< error / |||u|||
  double energy_norm = 0.0; ///< |||u||| used for rel_err
};

TrueError true_error(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                     int grading_levels = kDefaultGradingLevels, Exec exec = Exec::parallel);

/// Terms of the L2 representation of a_h(E, E), E = u - u_h.
struct RepresentationTerms {
  double lhs = 0.0;      ///< a_h(E, E)
  double residual = 0.0; ///< sum_K (r_K, E - E_h)_K
  double flux = 0.0;     ///< sum over interior and Neumann edges of int j_sigma {E - E_h}
  double jump = 0.0;     ///< sum over interior and Dirichlet edges of int {alpha grad E . n} j_u

  double rhs() const { return residual - flux - jump; }
  double defect() const { return lhs - rhs(); }
};

RepresentationTerms error_representation(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                                         std::span<const double> e_h,
                                         int grading_levels = kDefaultGradingLevels);
double error_representation_residual(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                                     std::span<const double> e_h,
                                     int grading_levels = kDefaultGradingLevels);

/// Flux jump j_sigma at point p of edge e for the elementwise gradients `grads`
/// (constant on interior edges, alpha grad u_h . n - g_N on Neumann edges, 0 on Dirichlet edges).
double flux_jump(const Mesh &mesh, const ProblemSpec &spec, std::span<const Vec2> grads, int e, const Vec2 &p);

/// Throws when `u` does not belong to `mesh`.
void check_same_mesh(const Mesh &mesh, const CrSolution &u);

} // namespace ncafem
