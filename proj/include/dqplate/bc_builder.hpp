#pragma once

#include "dqplate/dq_core.hpp"

#include <cstddef>
#include <vector>

namespace dqplate {

enum class BcKind { simply_supported, clamped };

/// Interior-sized differentiation matrices with two boundary conditions per
/// end built in, plus the recovery map back to the full grid.
///
/// Simply supported (w = w'' = 0): n_interior = N - 2, unknowns at nodes 2..N-1.
/// Clamped (w = w' = 0): n_interior = N - 4, unknowns at nodes 3..N-2; the
/// values at nodes 2 and N-1 follow from the two slope equations.
struct BoundaryOperatorSet {
  BcKind kind = BcKind::simply_supported;
  std::size_t n_interior = 0;
  Matrix Abar;
  Matrix Bbar;
  Matrix Cbar;
  Matrix Dbar;
  /// N x n_interior; R * v is the full-grid vector for interior values v.
  Matrix R;
  /// Zero-based grid index of the first interior unknown.
  std::size_t first_interior = 0;
  DiffMatrices full;

  [[nodiscard]] std::size_t grid_size() const noexcept { return full.size(); }
  [[nodiscard]] std::vector<double> interior_nodes() const;
};

/// DQWB construction for simply supported ends. Requires N >= 4.
[[nodiscard]] BoundaryOperatorSet build_ss(const DiffMatrices& dm);

/// Improved DQCY construction for clamped ends. Requires N >= 5.
[[nodiscard]] BoundaryOperatorSet build_clamped(const DiffMatrices& dm);

[[nodiscard]] BoundaryOperatorSet build_boundary_operators(const DiffMatrices& dm, BcKind kind);

enum class RowRole { deflection, derivative, governing };

/// Row-replacement plan for the delta-point approach (linear problems only).
/// The second and second-to-last nodes are moved to delta and 1 - delta; the
/// governing-equation rows there are replaced by derivative conditions (slope
/// for clamped, curvature for simply supported) and the end
/// rows by w = 0.
struct DeltaPlan {
  Grid1D grid;
  std::vector<RowRole> roles;
  double delta = 0.0;
};

[[nodiscard]] DeltaPlan build_delta_rows(const Grid1D& grid, double delta);

[[nodiscard]] const char* to_string(BcKind kind) noexcept;

}  // namespace dqplate
