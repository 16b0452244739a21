#include "dqplate/bc_builder.hpp"

#include "dqplate/errors.hpp"

#include <cmath>
#include <string>

namespace dqplate {

std::vector<double> BoundaryOperatorSet::interior_nodes() const {
  std::vector<double> out(n_interior);
  for (std::size_t k = 0; k < n_interior; ++k) out[k] = full.grid.nodes[first_interior + k];
  return out;
}

BoundaryOperatorSet build_ss(const DiffMatrices& dm) {
  const auto n = static_cast<Eigen::Index>(dm.size());
  if (n < 4) throw InvalidArgument("simply supported operators need N >= 4, got " + std::to_string(n));
  const Eigen::Index m = n - 2;

  BoundaryOperatorSet s;
  s.kind = BcKind::simply_supported;
  s.n_interior = static_cast<std::size_t>(m);
  s.first_interior = 1;
  s.full = dm;
  s.Abar = dm.A.block(1, 1, m, m);
  s.Bbar = dm.B.block(1, 1, m, m);
  // w'' vanishes at both ends, so w'''' is the interior second derivative of w''.
  s.Cbar = s.Abar * s.Bbar;
  s.Dbar = s.Bbar * s.Bbar;
  s.R = Matrix::Zero(n, m);
  s.R.block(1, 0, m, m).setIdentity();
  return s;
}

BoundaryOperatorSet build_clamped(const DiffMatrices& dm) {
  const auto n = static_cast<Eigen::Index>(dm.size());
  if (n < 5) throw InvalidArgument("clamped operators need N >= 5, got " + std::to_string(n));
  const Eigen::Index m = n - 4;
  const Matrix& a = dm.A;
  const Eigen::Index last = n - 1;

  // Slope rows at both ends, restricted to the two eliminated unknowns.
  Eigen::Matrix2d e;
  e << a(0, 1), a(0, last - 1), a(last, 1), a(last, last - 1);
  const double det = e.determinant();
  const double norms = e.row(0).norm() * e.row(1).norm();
  if (!(std::abs(det) > 1e-12 * norms)) {
    throw SingularElimination("clamped slope elimination is singular (det = " + std::to_string(det) +
                              ")");
  }
  // [w_2; w_{N-1}] = -E^{-1} * (slope-row entries of the interior unknowns)
  Matrix rhs(2, m);
  rhs.row(0) = a.block(0, 2, 1, m);
  rhs.row(1) = a.block(last, 2, 1, m);
  const Matrix eliminated = -e.inverse() * rhs;

  BoundaryOperatorSet s;
  s.kind = BcKind::clamped;
  s.n_interior = static_cast<std::size_t>(m);
  s.first_interior = 2;
  s.full = dm;
  s.R = Matrix::Zero(n, m);
  s.R.row(1) = eliminated.row(0);
  s.R.row(last - 1) = eliminated.row(1);
  s.R.block(2, 0, m, m).setIdentity();

  s.Abar = (dm.A * s.R).middleRows(2, m);
  s.Bbar = (dm.B * s.R).middleRows(2, m);
  s.Cbar = (dm.C3 * s.R).middleRows(2, m);
  s.Dbar = (dm.D * s.R).middleRows(2, m);
  return s;
}

BoundaryOperatorSet build_boundary_operators(const DiffMatrices& dm, BcKind kind) {
  return kind == BcKind::clamped ? build_clamped(dm) : build_ss(dm);
}

DeltaPlan build_delta_rows(const Grid1D& grid, double delta) {
  const std::size_t n = grid.size();
  if (n < 5) throw InvalidArgument("delta approach needs N >= 5, got " + std::to_string(n));
  if (!(delta > 0.0) || !(delta < grid.nodes[1])) {
    throw InvalidArgument("delta must satisfy 0 < delta < x_2 = " + std::to_string(grid.nodes[1]) +
                          ", got " + std::to_string(delta));
  }
  DeltaPlan plan;
  plan.delta = delta;
  std::vector<double> nodes = grid.nodes;
  nodes[1] = delta;
  nodes[n - 2] = 1.0 - delta;
  // Moved nodes no longer coincide with Chebyshev roots, so roots are dropped.
  plan.grid = make_grid_from_nodes(std::move(nodes));
  plan.grid.kind = grid.kind;
  plan.roles.assign(n, RowRole::governing);
  plan.roles.front() = plan.roles.back() = RowRole::deflection;
  plan.roles[1] = plan.roles[n - 2] = RowRole::derivative;
  return plan;
}

const char* to_string(BcKind kind) noexcept {
  switch (kind) {
    case BcKind::simply_supported: return "simply_supported";
    case BcKind::clamped: return "clamped";
  }
  return "unknown";
}

}  // namespace dqplate
