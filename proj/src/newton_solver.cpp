#include "dqplate/newton_solver.hpp"

#include "dqplate/errors.hpp"

#include <chrono>
#include <cmath>
#include <string>

namespace dqplate {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double max_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

NewtonResult newton(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn, const Vector& x0,
                    const NewtonOptions& options, JacobianStrategy strategy) {
  if (!(options.tol > 0.0)) throw InvalidArgument("newton: tolerance must be positive");
  if (options.max_iter < 0) throw InvalidArgument("newton: max_iter must be non-negative");
  if (!x0.allFinite()) throw InvalidArgument("newton: initial guess is not finite");

  NewtonResult out;
  out.x = x0;
  auto& rep = out.report;
  rep.jacobian_strategy = strategy;

  auto eval_residual = [&](const Vector& x) {
    const auto t0 = Clock::now();
    Vector r = residual_fn(x);
    rep.times.residual_s += seconds_since(t0);
    return r;
  };

  Vector r = eval_residual(out.x);
  double norm = max_norm(r);
  rep.residual_history.push_back(norm);

  while (true) {
    if (!std::isfinite(norm)) {
      rep.failure = "non-finite residual";
      return out;
    }
    if (norm <= options.tol) {
      rep.converged = true;
      return out;
    }
    if (rep.iterations >= options.max_iter) {
      rep.failure = "no convergence after " + std::to_string(rep.iterations) + " iterations";
      return out;
    }

    auto t0 = Clock::now();
    const Matrix jac = jacobian_fn(out.x);
    rep.times.jacobian_s += seconds_since(t0);

    t0 = Clock::now();
    Eigen::PartialPivLU<Matrix> lu(jac);
    const double rcond = lu.rcond();
    Vector step = lu.solve(r);
    rep.times.linear_solve_s += seconds_since(t0);
    if (!(rcond > 1e-16) || !step.allFinite()) {
      rep.failure = "singular Jacobian (rcond estimate " + std::to_string(rcond) + ")";
      return out;
    }

    Vector trial = out.x - step;
    Vector r_trial = eval_residual(trial);
    double trial_norm = max_norm(r_trial);
    // Damping only kicks in when a full step makes things worse.
    for (int k = 0; k < options.max_halvings && !(trial_norm < norm); ++k) {
      step *= 0.5;
      trial = out.x - step;
      r_trial = eval_residual(trial);
      trial_norm = max_norm(r_trial);
    }
    ++rep.iterations;
    out.x = std::move(trial);
    r = std::move(r_trial);
    norm = trial_norm;
    rep.residual_history.push_back(norm);
  }
}

Matrix fd_jacobian(const ResidualFn& residual_fn, const Vector& x, double step) {
  if (!(step > 0.0)) throw InvalidArgument("fd_jacobian: step must be positive");
  Vector xp = x;
  Matrix jac;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double hj = step * std::max(1.0, std::abs(x(j)));
    xp(j) = x(j) + hj;
    const Vector rp = residual_fn(xp);
    xp(j) = x(j) - hj;
    const Vector rm = residual_fn(xp);
    xp(j) = x(j);
    if (j == 0) jac.resize(rp.size(), x.size());
    jac.col(j) = (rp - rm) / (2.0 * hj);
  }
  return jac;
}

PlateSolution solve_plate(const AssembledSystem& sys, const NewtonOptions& options,
                          JacobianStrategy strategy, const std::optional<Vector>& warm_start,
                          double fd_step) {
  const Vector w0 = warm_start ? *warm_start : linear_solve(sys);
  if (static_cast<std::size_t>(w0.size()) != sys.n) {
    throw InvalidArgument("solve_plate: warm start has the wrong length");
  }
  ResidualFn res = [&sys](const Vector& w) { return residual(sys, w); };
  JacobianFn jac;
  if (strategy == JacobianStrategy::sjt_analytic) {
    jac = [&sys](const Vector& w) { return jacobian(sys, w); };
  } else {
    jac = [&res, fd_step](const Vector& w) { return fd_jacobian(res, w, fd_step); };
  }
  auto [w, report] = newton(res, jac, w0, options, strategy);
  const auto [u, v] = recover_inplane(sys, w);
  PlateSolution sol{recover_fields(sys, w, u, v), std::move(report)};
  sol.field.newton_iterations = sol.report.iterations;
  sol.field.final_residual_norm = sol.report.final_residual();
  return sol;
}

SweepResult load_sweep(const PlateSpec& spec_template, const std::vector<double>& q_values,
                       const NewtonOptions& options, JacobianStrategy strategy) {
  for (std::size_t i = 0; i < q_values.size(); ++i) {
    if (!(q_values[i] > 0.0)) throw InvalidArgument("load_sweep: loads must be positive");
    if (i > 0 && !(q_values[i] > q_values[i - 1])) {
      throw InvalidArgument("load_sweep: loads must be strictly increasing");
    }
  }
  SweepResult out;
  PlateSpec spec = spec_template;
  std::optional<Vector> warm;
  for (double q : q_values) {
    spec.q = q;
    const AssembledSystem sys = assemble(spec);
    const PlateSolution sol = solve_plate(sys, options, strategy, warm);
    out.rows.push_back({q, sol.field.center_deflection_ratio, sol.report.iterations,
                        sol.report.converged});
    if (!sol.report.converged) {
      out.complete = false;
      out.failure = "load " + std::to_string(q) + ": " + sol.report.failure;
      break;
    }
    warm = sol.field.Wbar;
  }
  return out;
}

const char* to_string(JacobianStrategy s) noexcept {
  switch (s) {
    case JacobianStrategy::sjt_analytic: return "sjt";
    case JacobianStrategy::finite_difference: return "fd";
  }
  return "unknown";
}

}  // namespace dqplate
