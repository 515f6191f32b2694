#include "ncafem/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ncafem {

namespace {

namespace fs = std::filesystem;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const fs::path &path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_diagnostics(std::ostream &os, const StepView &v, const ProblemSpec &spec, const RunConfig &config) {
  const auto &r = v.report;
  os << "eta_ju_hat " << num(r.total_eta_ju_hat) << '\n';
  os << "eta_ju_tilde " << num(r.total_eta_ju_tilde) << '\n';
  os << "eta_ju_hat_over_tilde " << num(r.total_eta_ju_tilde > 0 ? r.total_eta_ju_hat / r.total_eta_ju_tilde : 0.0)
     << '\n';
  os << "nonmonotone_vertices " << r.nonmonotone.size() << '\n';
  os << "max_c_kz " << num(v.classification.max_c()) << '\n';
  const CkzReport ck = c_kz_bound_check(v.mesh, spec, v.solution, v.classification);
  os << "local_bound_max_ratio " << num(ck.max_ratio) << '\n';
  os << "local_bound_violations " << ck.violations << '\n';
  if (spec.exact) {
    const auto &ex = *spec.exact;
    auto error = [&](const Vec2 &p, int k) {
      const auto t = v.mesh.coords(k);
      return ex.value(p, (1.0 / 3.0) * (t[0] + t[1] + t[2])) - cr_value(v.mesh, k, v.solution.values, p);
    };
    const auto eh = clement_interpolate(v.mesh, error, config.dirichlet_zero_clement);
    const RepresentationTerms t = error_representation(v.mesh, spec, v.solution, eh, config.quad_grading);
    os << "representation_clement " << (config.dirichlet_zero_clement ? "dirichlet-zero" : "literal") << '\n';
    os << "representation_lhs " << num(t.lhs) << '\n';
    os << "representation_rhs " << num(t.rhs()) << '\n';
    os << "representation_defect " << num(t.defect()) << '\n';
  }
}

} // namespace

void validate(const RunConfig &c) {
  if (!(c.theta > 0.0 && c.theta <= 1.0)) throw std::invalid_argument("theta out of range");
  if (!(c.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (c.max_steps < 0) throw std::invalid_argument("max-steps must be non-negative");
  if (c.quad_grading < 0) throw std::invalid_argument("quad-grading must be non-negative");
  parse_estimator(c.estimator);
  for (const auto &e : c.emit)
    if (e != "mesh" && e != "indicators" && e != "csv" && e != "plotdata" && e != "diagnostics")
      throw std::invalid_argument("unknown emit item '" + e + "'");
}

ProblemSpec resolve_problem(const std::string &name) {
  if (name == "kellogg") return kellogg_problem();
  if (name == "lshape") return lshape_problem();
  if (name.rfind("file:", 0) == 0) return load_problem_file(name.substr(5));
  throw std::invalid_argument("unknown problem '" + name + "' (kellogg, lshape, file:<path>)");
}

std::string describe(const RunConfig &config) {
  validate(config);
  const ProblemSpec spec = resolve_problem(config.problem);
  nlohmann::json j = describe_problem(spec);
  j["estimator"] = {{"kind", config.estimator},
                    {"theta", config.theta},
                    {"tol", config.tol},
                    {"max_steps", config.max_steps},
                    {"quad_grading", config.quad_grading},
                    {"dirichlet_zero_clement", config.dirichlet_zero_clement}};
  return j.dump(2);
}

int run(const RunConfig &config, std::ostream &log, std::ostream &err) {
  int last_step = -1;
  try {
    validate(config);
    const ProblemSpec spec = resolve_problem(config.problem);
    const fs::path out(config.out);
    fs::create_directories(out);
    auto emits = [&](const char *what) { return config.emit.count(what) > 0; };

    std::ofstream csv, plot;
    if (emits("csv")) {
      csv = open_out(out / "convergence.csv");
      csv << "step,elements,dofs,true_error,rel_err,eta,eta_tilde,eff_eta,eff_eta_tilde,marked\n";
    }
    if (emits("plotdata")) {
      plot = open_out(out / "plot_loglog.csv");
      plot << "log10_dofs,log10_error,log10_eta,log10_eta_tilde\n";
    }

    AdaptOptions opt;
    opt.estimator = parse_estimator(config.estimator);
    opt.theta = config.theta;
    opt.tol = config.tol;
    opt.max_steps = config.max_steps;
    opt.grading_levels = config.quad_grading;

    auto on_step = [&](const StepView &v) {
      const ConvergenceRecord &r = v.record;
      last_step = r.step;
      const std::string step = std::to_string(r.step);
      if (csv.is_open()) {
        csv << r.step << ',' << r.elements << ',' << r.dofs << ',' << num(r.true_error) << ',' << num(r.rel_err)
            << ',' << num(r.eta) << ',' << num(r.eta_tilde) << ',' << num(r.eff_eta) << ','
            << num(r.eff_eta_tilde) << ',' << r.marked << '\n';
        csv.flush();
      }
      if (plot.is_open()) {
        plot << num(std::log10(r.dofs)) << ',' << (r.has_exact ? num(std::log10(r.true_error)) : "nan") << ','
             << num(std::log10(r.eta)) << ',' << num(std::log10(r.eta_tilde)) << '\n';
        plot.flush();
      }
      if (emits("mesh")) {
        auto os = open_out(out / ("mesh_" + step + ".txt"));
        write_mesh(os, v.mesh);
      }
      if (emits("indicators")) {
        auto os = open_out(out / ("indicators_" + step + ".csv"));
        write_indicators_csv(os, v.report);
      }
      if (emits("diagnostics")) {
        auto os = open_out(out / ("diagnostics_" + step + ".txt"));
        write_diagnostics(os, v, spec, config);
      }
      log << "step " << r.step << ": elements " << r.elements << ", dofs " << r.dofs;
      if (r.has_exact) log << ", rel_err " << r.rel_err;
      log << ", eta " << r.eta << ", eta_tilde " << r.eta_tilde << '\n';
    };

    const AdaptResult res = adaptive_solve(spec, spec.build_initial_mesh(), opt, on_step);
    if (!res.converged) {
      log << "max-steps reached without meeting tol\n";
      return 2;
    }
    return 0;
  } catch (const AdaptError &e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception &e) {
    err << "error: ";
    if (last_step >= 0) err << "step " << last_step << ": ";
    err << e.what() << '\n';
  }
  return 1;
}

} // namespace ncafem
