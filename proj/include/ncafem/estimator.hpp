#pragma once

#include "ncafem/fem.hpp"
#include "ncafem/mesh.hpp"
#include "ncafem/parallel.hpp"
#include "ncafem/problems.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

namespace ncafem {

/// Per-element indicator components and global totals.
struct IndicatorReport {
  std::uint64_t mesh_id = 0;

  std::vector<double> eta_rf;       ///< eta_{R_f,K}
  std::vector<double> eta_jsigma;   ///< eta_{J_sigma,K}
  std::vector<double> eta_ju;       ///< eta_{J_u,K}
  std::vector<double> eta_ju_tilde; ///< modified solution-jump part (equals eta_ju away from N_M)
  std::vector<double> eta_ju_hat;   ///< (alpha_K / h_K)^{1/2} ||I_{h/2} u_h - u_h||_{dK}
  std::vector<double> eta_jtau;     ///< tangential-derivative jump part
  std::vector<double> eta;          ///< standard eta_K
  std::vector<double> eta_tilde;    ///< modified eta_K
  std::vector<double> eta_tangential;

  std::vector<double> edge_jsigma;  ///< mean of j_sigma over each edge
  std::vector<double> edge_ju_norm; ///< ||j_u||_{0,e}

  std::vector<int> nonmonotone; ///< N_M, ascending
  bool has_modified = false;

  double total_eta = 0.0;
  double total_eta_tilde = 0.0;
  double total_eta_tangential = 0.0;
  double total_eta_ju_hat = 0.0;
  double total_eta_ju_tilde = 0.0;

  int size() const { return static_cast<int>(eta.size()); }
};

/// Quasi-monotonicity data for one vertex.
struct VertexPatch {
  int vertex = -1;
  bool interface = false; ///< more than one coefficient value around the vertex
  bool quasi_monotone = true;
  int anchor = -1;           ///< K_z
  std::vector<int> elements; ///< star order
  std::vector<double> c;     ///< C_{K,z} per star element
  std::vector<std::vector<int>> path; ///< chosen path from K to K_z (elements of the star)
};

struct PatchClassification {
  std::uint64_t mesh_id = 0;
  std::vector<VertexPatch> patches; ///< indexed by vertex id
  std::vector<int> nonmonotone;     ///< N_M, ascending
  std::vector<char> in_nm;          ///< per vertex

  double max_c() const;
};

/// Quasi-monotonicity of a star given its coefficients, straight from the
/// definition: the edge-connected component of K in {alpha >= alpha_K} must
/// contain every maximal element (interior and Neumann vertices) or an element
/// whose boundary edge at z is Dirichlet (Dirichlet vertices).
bool star_quasi_monotone(const VertexStar &star, const std::vector<double> &alpha,
                         const std::vector<char> &dirichlet_end);

PatchClassification classify_patches(const Mesh &mesh, Exec exec = Exec::parallel);

/// Flux and solution jump norms and the standard indicator.
IndicatorReport standard_indicators(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                                    Exec exec = Exec::parallel);

/// Per-element tangential-jump component (alpha_e^- h_e / 2) ||j_tau||^2 summed over edges.
std::vector<double> tangential_indicator(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                                         Exec exec = Exec::parallel);

/// Nodal values of I_{h/2} u_h on the half mesh (parent vertices, then edge midpoints).
std::vector<double> ihalf_interpolate(const Mesh &mesh, const HalfMesh &half, const ProblemSpec &spec,
                                      const CrSolution &u_h, const PatchClassification &cls);

/// Fills the modified parts of `report` (eta_ju_tilde, eta_tilde, eta_ju_hat and totals).
void modified_indicators(const Mesh &mesh, const HalfMesh &half, const ProblemSpec &spec, const CrSolution &u_h,
                         const PatchClassification &cls, IndicatorReport &report, Exec exec = Exec::parallel);

/// Everything above in one call.
IndicatorReport estimate(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                         Exec exec = Exec::parallel);

struct CkzEntry {
  int element = -1;
  int vertex = -1;
  double c = 1.0;
  double lhs = 0.0; ///< (alpha_K / h_K) ||I_{h/2} u_h - u_h||^2 on dT_{K,z}
  double rhs = 0.0; ///< 2 C_{K,z} sum over half edges at z of (alpha_e^- / h_e) ||[u_h]||^2
};

struct CkzReport {
  std::vector<CkzEntry> entries;
  double max_ratio = 0.0; ///< max lhs / rhs (pairs with rhs = 0 and lhs = 0 are skipped)
  int violations = 0;     ///< lhs > rhs (1 + 1e-12)
};

/// Both sides of the local bound between the I_{h/2} term and the solution jumps,
/// for every element with a vertex in N_M.
CkzReport c_kz_bound_check(const Mesh &mesh, const ProblemSpec &spec, const CrSolution &u_h,
                           const PatchClassification &cls);

using ElementFunction = std::function<double(const Vec2 &p, int element)>;

/// CR interpolant with coefficient on e equal to the mean of v over K_e^+.
/// With dirichlet_zero the coefficient on Dirichlet edges is 0.
std::vector<double> clement_interpolate(const Mesh &mesh, const ElementFunction &v, bool dirichlet_zero = false);

/// ||l||^2 on a segment of length h for l linear with end values a, b.
inline double linear_sq_norm(double h, double a, double b) { return h / 3.0 * (a * a + a * b + b * b); }

/// CSV dump: element,eta_rf,eta_jsigma,eta_ju,eta_ju_tilde,eta,eta_tilde, preceded by
/// a comment line listing N_M.
void write_indicators_csv(std::ostream &os, const IndicatorReport &report);

} // namespace ncafem
