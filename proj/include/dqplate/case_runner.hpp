#pragma once

#include "dqplate/newton_solver.hpp"
#include "dqplate/plate_model.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dqplate {

/// Malformed or invalid case file. The message names the line or field.
class CaseParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SweepBlock {
  std::vector<double> loads;
};

struct BenchBlock {
  std::vector<std::size_t> grids;
  int repetitions = 3;
};

struct ConvergenceBlock {
  std::vector<std::size_t> grids;
  std::vector<GridKind> kinds{GridKind::chebyshev_mapped};
  /// Loads to evaluate; empty means the plate's own q.
  std::vector<double> loads;
  std::size_t reference_grid = 13;
  bool linear_comparison = false;
  double delta = 1e-5;
};

struct CaseFile {
  PlateSpec spec;
  NewtonOptions solver;
  JacobianStrategy jacobian = JacobianStrategy::sjt_analytic;
  double fd_step = kDefaultFdStep;
  std::optional<SweepBlock> sweep;
  std::optional<BenchBlock> bench;
  std::optional<ConvergenceBlock> convergence;
};

/// Parses a JSON case document. Unknown keys are rejected.
[[nodiscard]] CaseFile parse_case(std::string_view text);
[[nodiscard]] CaseFile load_case(const std::filesystem::path& path);

/// Command-line overrides applied on top of the case file.
struct Overrides {
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<JacobianStrategy> jacobian;
};

void apply_overrides(CaseFile& c, const Overrides& o);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int parse_error = 2;
inline constexpr int not_converged = 3;
}  // namespace exit_code

struct BenchRow {
  std::size_t n = 0;  ///< grid points per side
  JacobianStrategy strategy = JacobianStrategy::sjt_analytic;
  double jac_ms = 0.0;
  double solve_ms = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  /// Largest relative difference between the two strategies' converged W, per grid.
  std::vector<double> strategy_difference;
};

[[nodiscard]] BenchReport run_benchmark(const CaseFile& c);

struct ConvergenceRow {
  GridKind kind = GridKind::chebyshev_mapped;
  std::size_t n = 0;
  double q = 0.0;
  double center_deflection_ratio = 0.0;
  double abs_error = 0.0;  ///< against the Chebyshev reference grid
  bool converged = false;
};

struct LinearComparisonRow {
  std::string method;  ///< "delta", "dqwb" or "dqcy"
  std::size_t n = 0;
  double center_deflection_ratio = 0.0;
  double series = 0.0;
  double abs_error = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<LinearComparisonRow> linear;
  bool all_converged = true;
};

[[nodiscard]] ConvergenceReport run_convergence_study(const CaseFile& c);

/// Number of worker threads for independent solves; DQPLATE_WORKERS caps it.
[[nodiscard]] std::size_t worker_count();

/// CLI-level entry points. Each writes its CSV files into out_dir, reports to
/// `log`, and returns one of the exit codes above.
int run_case(const std::filesystem::path& path, const std::filesystem::path& out_dir,
             const Overrides& o, std::ostream& log);
int run_sweep(const std::filesystem::path& path, const std::filesystem::path& out_dir,
              const Overrides& o, std::ostream& log);
int run_bench(const std::filesystem::path& path, const std::filesystem::path& out_dir,
              const Overrides& o, std::ostream& log);
int run_convergence(const std::filesystem::path& path, const std::filesystem::path& out_dir,
                    const Overrides& o, std::ostream& log);

/// Formats a value with 12 significant digits and '.' as decimal point.
[[nodiscard]] std::string format_number(double v);

}  // namespace dqplate
