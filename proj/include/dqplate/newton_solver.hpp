#pragma once

#include "dqplate/plate_model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dqplate {

enum class JacobianStrategy { sjt_analytic, finite_difference };

using ResidualFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

struct NewtonOptions {
  double tol = 1e-5;  ///< on max |phi|
  int max_iter = 25;
  /// Halve the step (up to this many times) when the residual grows.
  int max_halvings = 8;
};

struct PhaseTimes {
  double residual_s = 0.0;
  double jacobian_s = 0.0;
  double linear_solve_s = 0.0;
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> residual_history;  ///< max-norm, starting with the initial guess
  bool converged = false;
  JacobianStrategy jacobian_strategy = JacobianStrategy::sjt_analytic;
  PhaseTimes times;
  std::string failure;  ///< empty unless the iteration diverged or stalled

  [[nodiscard]] double final_residual() const {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
};

struct NewtonResult {
  Vector x;
  NewtonReport report;
};

/// Plain Newton-Raphson with LU solves. Never throws on divergence; the
/// report carries the diagnosis instead.
[[nodiscard]] NewtonResult newton(const ResidualFn& residual_fn, const JacobianFn& jacobian_fn,
                                  const Vector& x0, const NewtonOptions& options = {},
                                  JacobianStrategy strategy = JacobianStrategy::sjt_analytic);

/// Default relative step for central differences.
inline constexpr double kDefaultFdStep = 1e-6;

/// Central-difference Jacobian; column j perturbs x_j by +-step * max(1, |x_j|).
[[nodiscard]] Matrix fd_jacobian(const ResidualFn& residual_fn, const Vector& x,
                                 double step = kDefaultFdStep);

struct PlateSolution {
  SolutionField field;
  NewtonReport report;
};

/// Nonlinear plate solve. Starts from the linear solution unless a warm
/// start is given.
[[nodiscard]] PlateSolution solve_plate(const AssembledSystem& sys, const NewtonOptions& options = {},
                                        JacobianStrategy strategy = JacobianStrategy::sjt_analytic,
                                        const std::optional<Vector>& warm_start = std::nullopt,
                                        double fd_step = kDefaultFdStep);

struct SweepRow {
  double q = 0.0;
  double center_deflection_ratio = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  bool complete = true;  ///< false if a load failed; rows stop at the failure
  std::string failure;
};

/// Solves each load in turn, warm-starting from the previous converged W.
/// Loads must be positive and strictly increasing.
[[nodiscard]] SweepResult load_sweep(const PlateSpec& spec_template, const std::vector<double>& q_values,
                                     const NewtonOptions& options = {},
                                     JacobianStrategy strategy = JacobianStrategy::sjt_analytic);

[[nodiscard]] const char* to_string(JacobianStrategy s) noexcept;

}  // namespace dqplate
