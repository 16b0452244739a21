#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace dqplate {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest grid size accepted by the DQ builders. High-order DQ matrices
/// lose accuracy quickly beyond this.
inline constexpr std::size_t kMaxGridPoints = 31;

enum class GridKind { uniform, chebyshev_mapped };

/// Ordered collocation nodes on [0, 1].
///
/// For Chebyshev-mapped grids the Chebyshev roots that generated the nodes
/// are kept (in the same, increasing, order) so the closed-form first
/// derivative weights can be evaluated.
struct Grid1D {
  GridKind kind = GridKind::uniform;
  std::vector<double> nodes;
  std::vector<double> roots;

  [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// Full-grid DQ weighting matrices for derivative orders 1 to 4.
struct DiffMatrices {
  Matrix A;
  Matrix B;
  Matrix C3;
  Matrix D;
  Grid1D grid;

  [[nodiscard]] std::size_t size() const noexcept { return grid.size(); }
  /// Matrix for derivative order 1..4.
  [[nodiscard]] const Matrix& order(int m) const;
};

/// Roots of the Chebyshev polynomial T_n, cos((2i-1)pi/2n), i = 1..n.
[[nodiscard]] std::vector<double> chebyshev_roots(std::size_t n);

/// Builds N nodes on [0, 1]. Chebyshev grids use the roots of T_N mapped
/// affinely so that the first and last roots land on 0 and 1.
[[nodiscard]] Grid1D make_grid(std::size_t n, GridKind kind);

/// Builds a grid from explicit nodes (must be strictly increasing).
[[nodiscard]] Grid1D make_grid_from_nodes(std::vector<double> nodes);

/// First-derivative weights from the Lagrange form; the diagonal is the
/// negative off-diagonal row sum.
[[nodiscard]] Matrix diff_matrix_first(const Grid1D& grid);

/// Orders 2..4 from the first-order matrix via the Quan-Chang recursion.
[[nodiscard]] DiffMatrices diff_matrices_higher(const Matrix& first, const Grid1D& grid);

/// Closed-form first-derivative weights for Chebyshev-mapped grids.
/// Falls back to the Lagrange weights (and logs to stderr) if the two
/// disagree beyond 1e-10 relative.
[[nodiscard]] Matrix chebyshev_fast_weights(const Grid1D& grid);

/// Convenience: make_grid + diff_matrix_first + diff_matrices_higher.
[[nodiscard]] DiffMatrices make_diff_matrices(std::size_t n, GridKind kind);

[[nodiscard]] const char* to_string(GridKind kind) noexcept;

}  // namespace dqplate
