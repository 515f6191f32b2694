#pragma once

#include "ncafem/mesh.hpp"

#include <json.hpp>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ncafem {

class ProblemError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exact solution of a benchmark.  `side` is any point inside the element the
/// evaluation belongs to; it selects the branch for piecewise-defined solutions
/// evaluated on an interface.
struct ExactSolution {
  std::function<double(const Vec2 &p, const Vec2 &side)> value;
  std::function<Vec2(const Vec2 &p, const Vec2 &side)> gradient;
  double energy_norm = 0.0; ///< |||u|||, 0 when unknown
  std::string energy_norm_note;

  double operator()(const Vec2 &p) const { return value(p, p); }
  Vec2 grad(const Vec2 &p) const { return gradient(p, p); }
};

struct Subdomain {
  int id = 0;
  double alpha = 1.0;
  std::string label;
  std::vector<Vec2> polygon;
};

struct BoundarySegment {
  Vec2 from;
  Vec2 to;
  BoundaryTag tag = BoundaryTag::dirichlet;
};

struct ProblemSpec {
  std::string name;
  std::vector<Vec2> domain;
  std::vector<Subdomain> subdomains;
  std::vector<BoundarySegment> boundary_segments;

  std::function<double(const Vec2 &p, int subdomain)> f;
  std::function<double(const Vec2 &p)> g_dirichlet;
  std::function<double(const Vec2 &p)> g_neumann;
  BoundaryTagger boundary;
  bool f_is_zero = false;

  std::optional<ExactSolution> exact;
  std::vector<Vec2> singular_points;

  MeshInput initial_mesh;        ///< coarse triangulation resolving the subdomains
  nlohmann::json source;         ///< original configuration for file-based problems

  AlphaMap alpha_map() const;
  double alpha(int subdomain) const;
  Mesh build_initial_mesh() const;
};

// Kellogg checkerboard problem, beta = 0.1.
inline constexpr double kKelloggBeta = 0.1;
inline constexpr double kKelloggR = 161.4476387975881;
inline constexpr double kKelloggSigma = -14.92256510455152;
// rho = pi / 4

// |||u||| of the benchmark solutions.  Obtained by reducing the energy integral
// to a 1D angular integral (the radial part is exact) evaluated with 30-digit
// adaptive quadrature; see tests/oracles/exact_energy_norms.py.
inline constexpr double kKelloggEnergyNorm = 0.565011543756888335696634596354;
inline constexpr double kLShapeEnergyNorm = 1.35507441193285124862345955268;

ProblemSpec kellogg_problem();
ProblemSpec lshape_problem();

/// Loads a problem configuration (JSON) together with its initial mesh.
ProblemSpec load_problem_file(const std::string &path);
ProblemSpec parse_problem(const nlohmann::json &config, const std::string &base_dir);

/// Kellogg angular factor and its derivative; exposed for interface checks.
double kellogg_mu(double theta, int branch);
double kellogg_dmu(double theta, int branch);

/// Local index of a vertex of t lying on a declared singular point, or -1.
int singular_vertex(const ProblemSpec &spec, const TriangleCoords &t);

struct EnergyNormEstimate {
  double value = 0.0;
  double self_convergence = 0.0; ///< relative change against one level coarser
};

/// |||u||| by graded quadrature on `depth` uniform bisections of the initial mesh.
EnergyNormEstimate energy_norm_of_exact(const ProblemSpec &spec, int depth,
                                        int grading_levels = 14);

/// Human-readable JSON description of the problem.
nlohmann::json describe_problem(const ProblemSpec &spec);

} // namespace ncafem
