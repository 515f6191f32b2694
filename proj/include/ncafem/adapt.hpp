#pragma once

#include "ncafem/estimator.hpp"
#include "ncafem/fem.hpp"
#include "ncafem/mesh.hpp"
#include "ncafem/parallel.hpp"
#include "ncafem/problems.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ncafem {

enum class EstimatorKind { standard, modified, tangential };

EstimatorKind parse_estimator(const std::string &name);
std::string to_string(EstimatorKind kind);

/// Bulk marking: smallest prefix of the elements sorted by squared indicator
/// (descending, ties by id) carrying theta of the total.
std::vector<int> mark(std::span<const double> indicators, double theta);
std::vector<int> mark(const IndicatorReport &report, double theta, EstimatorKind which);

/// Indicator family selected by `which`.
std::span<const double> indicators_of(const IndicatorReport &report, EstimatorKind which);
double total_of(const IndicatorReport &report, EstimatorKind which);

struct ConvergenceRecord {
  int step = 0;
  int elements = 0;
  int dofs = 0; ///< free dofs
  bool has_exact = false;
  double true_error = 0.0;
  double rel_err = 0.0;
  double eta = 0.0;       ///< standard or tangential estimator (follows the driving family)
  double eta_tilde = 0.0; ///< modified estimator
  double eff_eta = 0.0;
  double eff_eta_tilde = 0.0;
  int marked = 0;

  double eta_standard = 0.0;
  double eta_tangential = 0.0;
  double eta_ju_hat = 0.0;
  double eta_ju_tilde = 0.0;
  double uh_energy = 0.0; ///< |||u_h|||
  int nonmonotone = 0;    ///< |N_M|
};

struct AdaptOptions {
  EstimatorKind estimator = EstimatorKind::modified;
  double theta = 0.2;
  double tol = 0.1;
  int max_steps = 500;
  int grading_levels = kDefaultGradingLevels;
  Exec exec = Exec::parallel;
};

struct StepView {
  const Mesh &mesh;
  const CrSolution &solution;
  const IndicatorReport &report;
  const PatchClassification &classification;
  const ConvergenceRecord &record;
};

struct AdaptResult {
  std::vector<ConvergenceRecord> records;
  Mesh mesh;
  CrSolution solution;
  IndicatorReport report;
  bool converged = false;
};

class AdaptError : public std::runtime_error {
public:
  AdaptError(int step, const std::string &what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  int step() const { return step_; }

private:
  int step_;
};

/// Solve, estimate, mark and refine until the stopping test passes or
/// max_steps refinements were made.  `on_step` sees every step before marking.
AdaptResult adaptive_solve(const ProblemSpec &spec, const Mesh &initial, const AdaptOptions &options,
                           const std::function<void(const StepView &)> &on_step = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Slope of log(true error) (or log(eta) without exact solution) against log(dofs)
/// over the last tail_fraction of the records (at least three).
double convergence_slope(std::span<const ConvergenceRecord> records, double tail_fraction);

} // namespace ncafem
