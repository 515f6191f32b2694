#include "ncafem/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

int main(int argc, char **argv) {
  CLI::App app{"Adaptive Crouzeix-Raviart solver for elliptic interface problems"};
  app.require_subcommand(1);

  ncafem::RunConfig cfg;
  std::string emit = "csv,plotdata";
  auto add_common = [&](CLI::App *cmd) {
    cmd->add_option("--problem", cfg.problem, "kellogg, lshape or file:<path>")->capture_default_str();
    cmd->add_option("--estimator", cfg.estimator, "standard, modified or tangential")->capture_default_str();
    cmd->add_option("--theta", cfg.theta, "bulk marking fraction in (0, 1]")->capture_default_str();
    cmd->add_option("--tol", cfg.tol, "stopping tolerance on the relative error")->capture_default_str();
    cmd->add_option("--max-steps", cfg.max_steps, "refinement steps before giving up")->capture_default_str();
    cmd->add_option("--quad-grading", cfg.quad_grading, "graded quadrature levels at singular points")
        ->capture_default_str();
    cmd->add_flag("--dirichlet-zero-clement", cfg.dirichlet_zero_clement,
                  "Clement interpolant vanishes on Dirichlet edges (diagnostics)");
  };
  auto *run = app.add_subcommand("run", "adaptive solve");
  add_common(run);
  run->add_option("--out", cfg.out, "output directory")->capture_default_str();
  run->add_option("--emit", emit, "comma list of mesh, indicators, csv, plotdata, diagnostics")
      ->capture_default_str();
  auto *describe = app.add_subcommand("describe", "print the resolved problem without solving");
  add_common(describe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  cfg.emit.clear();
  std::stringstream ss(emit);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) cfg.emit.insert(item);

  if (*describe) {
    try {
      std::cout << ncafem::describe(cfg) << '\n';
      return 0;
    } catch (const std::exception &e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return ncafem::run(cfg, std::cout, std::cerr);
}
