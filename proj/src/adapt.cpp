#include "ncafem/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ncafem {

EstimatorKind parse_estimator(const std::string &name) {
  if (name == "standard") return EstimatorKind::standard;
  if (name == "modified") return EstimatorKind::modified;
  if (name == "tangential") return EstimatorKind::tangential;
  throw std::invalid_argument("unknown estimator '" + name + "' (standard, modified, tangential)");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
  case EstimatorKind::standard: return "standard";
  case EstimatorKind::modified: return "modified";
  default: return "tangential";
  }
}

std::vector<int> mark(std::span<const double> ind, double theta) {
  if (ind.empty()) throw std::invalid_argument("empty indicator report");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta out of range");
  std::vector<int> order(ind.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = ind[a] * ind[a], sb = ind[b] * ind[b];
    return sa != sb ? sa > sb : a < b;
  });
  double total = 0.0;
  for (int k : order) total += ind[k] * ind[k];
  std::vector<int> out;
  if (total == 0.0) return out;
  double acc = 0.0;
  for (int k : order) {
    out.push_back(k);
    acc += ind[k] * ind[k];
    if (acc >= theta * total) break;
  }
  return out;
}

std::span<const double> indicators_of(const IndicatorReport &r, EstimatorKind which) {
  switch (which) {
  case EstimatorKind::standard: return r.eta;
  case EstimatorKind::modified: return r.eta_tilde;
  default: return r.eta_tangential;
  }
}

double total_of(const IndicatorReport &r, EstimatorKind which) {
  switch (which) {
  case EstimatorKind::standard: return r.total_eta;
  case EstimatorKind::modified: return r.total_eta_tilde;
  default: return r.total_eta_tangential;
  }
}

std::vector<int> mark(const IndicatorReport &r, double theta, EstimatorKind which) {
  return mark(indicators_of(r, which), theta);
}

AdaptResult adaptive_solve(const ProblemSpec &spec, const Mesh &initial, const AdaptOptions &opt,
                           const std::function<void(const StepView &)> &on_step) {
  if (!(opt.theta > 0.0 && opt.theta <= 1.0)) throw std::invalid_argument("theta out of range");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (opt.max_steps < 0) throw std::invalid_argument("max-steps must be non-negative");

  AdaptResult res;
  Mesh mesh = initial;
  for (int step = 0;; ++step) {
    CrSolution uh;
    IndicatorReport report;
    PatchClassification cls;
    ConvergenceRecord rec;
    try {
      const SparseSystem sys = assemble(mesh, spec, opt.exec);
      uh = solve(sys);
      report = standard_indicators(mesh, spec, uh, opt.exec);
      cls = classify_patches(mesh, opt.exec);
      const HalfMesh half = half_refine(mesh);
      modified_indicators(mesh, half, spec, uh, cls, report, opt.exec);
      rec.dofs = static_cast<int>(sys.b.size());
    } catch (const std::exception &e) {
      throw AdaptError(step, e.what());
    }
    rec.step = step;
    rec.elements = mesh.num_elements();
    rec.eta_standard = report.total_eta;
    rec.eta_tangential = report.total_eta_tangential;
    rec.eta = opt.estimator == EstimatorKind::tangential ? report.total_eta_tangential : report.total_eta;
    rec.eta_tilde = report.total_eta_tilde;
    rec.eta_ju_hat = report.total_eta_ju_hat;
    rec.eta_ju_tilde = report.total_eta_ju_tilde;
    rec.uh_energy = broken_energy_norm(mesh, uh.values);
    rec.nonmonotone = static_cast<int>(cls.nonmonotone.size());
    if (spec.exact) {
      const TrueError te = true_error(mesh, spec, uh, opt.grading_levels, opt.exec);
      rec.has_exact = true;
      rec.true_error = te.error;
      rec.rel_err = te.rel_err;
      if (te.error > 0.0) {
        rec.eff_eta = rec.eta / te.error;
        rec.eff_eta_tilde = rec.eta_tilde / te.error;
      }
    }
    const double drive = total_of(report, opt.estimator);
    bool done;
    if (rec.has_exact) {
      done = rec.rel_err <= opt.tol;
    } else {
      const double denom = std::sqrt(drive * drive + rec.uh_energy * rec.uh_energy);
      done = denom == 0.0 || drive / denom <= opt.tol;
    }
    std::vector<int> marked;
    if (!done && step < opt.max_steps) marked = mark(report, opt.theta, opt.estimator);
    rec.marked = static_cast<int>(marked.size());
    res.records.push_back(rec);
    if (on_step) on_step(StepView{mesh, uh, report, cls, res.records.back()});
    if (done || step >= opt.max_steps || marked.empty()) {
      res.converged = done;
      res.mesh = std::move(mesh);
      res.solution = std::move(uh);
      res.report = std::move(report);
      return res;
    }
    try {
      mesh = bisect(mesh, marked);
    } catch (const std::exception &e) {
      throw AdaptError(step, e.what());
    }
  }
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

double convergence_slope(std::span<const ConvergenceRecord> records, double tail_fraction) {
  const int n = static_cast<int>(records.size());
  const int tail = std::max(3, static_cast<int>(std::ceil(tail_fraction * n)));
  if (n < 3 || tail > n) throw std::invalid_argument("insufficient records for a slope");
  std::vector<double> x, y;
  for (int i = n - tail; i < n; ++i) {
    x.push_back(records[i].dofs);
    y.push_back(records[i].has_exact ? records[i].true_error : records[i].eta);
  }
  return loglog_slope(x, y);
}

} // namespace ncafem
