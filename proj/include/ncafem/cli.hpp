#pragma once

#include "ncafem/adapt.hpp"
#include "ncafem/problems.hpp"

#include <iosfwd>
#include <set>
#include <string>

namespace ncafem {

struct RunConfig {
  std::string problem = "kellogg"; ///< kellogg, lshape or file:<path>
  std::string estimator = "modified";
  double theta = 0.2;
  double tol = 0.1;
  int max_steps = 500;
  std::string out = ".";
  std::set<std::string> emit{"csv", "plotdata"}; ///< mesh, indicators, csv, plotdata, diagnostics
  int quad_grading = kDefaultGradingLevels;
  bool dirichlet_zero_clement = false;
};

/// Throws std::invalid_argument with a user-facing message.
void validate(const RunConfig &config);

ProblemSpec resolve_problem(const std::string &name);

/// Runs the adaptive loop and writes the requested files.  Returns 0 when the
/// tolerance was reached, 2 when max-steps ran out, 1 on error (message on err).
int run(const RunConfig &config, std::ostream &log, std::ostream &err);

/// Resolved problem and estimator settings as JSON text.
std::string describe(const RunConfig &config);

} // namespace ncafem
