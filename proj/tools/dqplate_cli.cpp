// dqplate: solve, sweep, benchmark and convergence studies for von Karman
// plate cases described by JSON case files.

#include "dqplate/case_runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

int main(int argc, char** argv) {
  using namespace dqplate;

  CLI::App app{"Differential quadrature solver for large-deflection rectangular plates"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides overrides;
  double tol = 0.0;
  int max_iter = 0;
  JacobianStrategy strategy = JacobianStrategy::sjt_analytic;
  auto* tol_opt = app.add_option("--tol", tol, "Newton tolerance on max |residual|");
  auto* iter_opt = app.add_option("--max-iter", max_iter, "Newton iteration cap");
  const std::map<std::string, JacobianStrategy> strategies{
      {"sjt", JacobianStrategy::sjt_analytic}, {"fd", JacobianStrategy::finite_difference}};
  auto* jac_opt = app.add_option("--jacobian", strategy, "Jacobian strategy")
                      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case));

  std::string case_path;
  std::string out_dir = ".";
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("case", case_path, "Case file (JSON)")->required();
    sub->add_option("--out", out_dir, "Output directory");
    return sub;
  };
  auto* solve = add("solve", "Solve one case; writes solution.csv and summary.csv");
  auto* sweep = add("sweep", "Load sweep with warm starts; writes sweep.csv");
  auto* bench = add("bench", "Time SJT vs finite-difference Jacobians; writes bench.csv");
  auto* converge = add("converge", "Grid convergence study; writes convergence.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_code::ok : exit_code::parse_error;
  }

  if (*tol_opt) overrides.tol = tol;
  if (*iter_opt) overrides.max_iter = max_iter;
  if (*jac_opt) overrides.jacobian = strategy;

  if (*solve) return run_case(case_path, out_dir, overrides, std::cerr);
  if (*sweep) return run_sweep(case_path, out_dir, overrides, std::cerr);
  if (*bench) return run_bench(case_path, out_dir, overrides, std::cerr);
  if (*converge) return run_convergence(case_path, out_dir, overrides, std::cerr);
  return exit_code::failure;
}
