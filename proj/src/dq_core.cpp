#include "dqplate/dq_core.hpp"

#include "dqplate/errors.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

namespace dqplate {

namespace {

constexpr double kMinNodeGap = 1e-12;

void check_nodes(const std::vector<double>& nodes) {
  if (nodes.size() < 2) {
    throw InvalidArgument("grid needs at least 2 nodes, got " + std::to_string(nodes.size()));
  }
  if (nodes.size() > kMaxGridPoints) {
    throw InvalidArgument("grid size " + std::to_string(nodes.size()) + " exceeds the limit of " +
                          std::to_string(kMaxGridPoints));
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] - nodes[i - 1] > kMinNodeGap)) {
      throw DegenerateGrid("grid nodes " + std::to_string(i - 1) + " and " + std::to_string(i) +
                           " are not strictly increasing");
    }
  }
}

void fill_diagonal_by_row_sum(Matrix& w) {
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      if (j != i) s += w(i, j);
    }
    w(i, i) = -s;
  }
}

}  // namespace

const Matrix& DiffMatrices::order(int m) const {
  switch (m) {
    case 1: return A;
    case 2: return B;
    case 3: return C3;
    case 4: return D;
    default: throw InvalidArgument("derivative order must be in 1..4, got " + std::to_string(m));
  }
}

std::vector<double> chebyshev_roots(std::size_t n) {
  if (n < 1) throw InvalidArgument("Chebyshev polynomial degree must be at least 1");
  std::vector<double> r(n);
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = std::cos((2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi / (2.0 * dn));
  }
  return r;
}

Grid1D make_grid(std::size_t n, GridKind kind) {
  if (n < 2) throw InvalidArgument("grid needs at least 2 nodes, got " + std::to_string(n));
  if (n > kMaxGridPoints) {
    throw InvalidArgument("grid size " + std::to_string(n) + " exceeds the limit of " +
                          std::to_string(kMaxGridPoints));
  }
  Grid1D g;
  g.kind = kind;
  g.nodes.resize(n);
  const double last = static_cast<double>(n - 1);
  if (kind == GridKind::uniform) {
    for (std::size_t i = 0; i < n; ++i) g.nodes[i] = static_cast<double>(i) / last;
  } else {
    g.roots = chebyshev_roots(n);
    const double span = g.roots[n - 1] - g.roots[0];
    for (std::size_t i = 0; i < n; ++i) g.nodes[i] = (g.roots[i] - g.roots[0]) / span;
    g.nodes.front() = 0.0;
    g.nodes.back() = 1.0;
  }
  check_nodes(g.nodes);
  return g;
}

Grid1D make_grid_from_nodes(std::vector<double> nodes) {
  check_nodes(nodes);
  Grid1D g;
  g.kind = GridKind::uniform;
  g.nodes = std::move(nodes);
  return g;
}

Matrix diff_matrix_first(const Grid1D& grid) {
  check_nodes(grid.nodes);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto& x = grid.nodes;
  // Lagrange form: a_ij = P(x_i) / ((x_i - x_j) P(x_j)), P(x_i) = prod_{k!=i}(x_i - x_k).
  std::vector<double> p(grid.size(), 1.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != i) p[i] *= x[i] - x[k];
    }
  }
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) a(i, j) = p[i] / ((x[i] - x[j]) * p[j]);
    }
  }
  fill_diagonal_by_row_sum(a);
  return a;
}

DiffMatrices diff_matrices_higher(const Matrix& first, const Grid1D& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (first.rows() != n || first.cols() != n) {
    throw InvalidArgument("first-derivative matrix does not match the grid size");
  }
  const auto& x = grid.nodes;
  DiffMatrices dm;
  dm.grid = grid;
  dm.A = first;
  auto next = [&](const Matrix& prev, int order) {
    Matrix w = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        w(i, j) = order * (first(i, j) * prev(i, i) - prev(i, j) / (x[i] - x[j]));
      }
    }
    fill_diagonal_by_row_sum(w);
    return w;
  };
  dm.B = next(dm.A, 2);
  dm.C3 = next(dm.B, 3);
  dm.D = next(dm.C3, 4);
  return dm;
}

Matrix chebyshev_fast_weights(const Grid1D& grid) {
  if (grid.kind != GridKind::chebyshev_mapped || grid.roots.size() != grid.size()) {
    throw InvalidArgument("closed-form weights need a Chebyshev-mapped grid with its roots");
  }
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto& r = grid.roots;
  const double span = r[n - 1] - r[0];
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      a(i, j) = sign * span / (r[i] - r[j]) * std::sqrt((1.0 - r[j] * r[j]) / (1.0 - r[i] * r[i]));
    }
  }
  fill_diagonal_by_row_sum(a);

  const Matrix generic = diff_matrix_first(grid);
  const double scale = generic.cwiseAbs().maxCoeff();
  const double diff = (a - generic).cwiseAbs().maxCoeff();
  if (diff > 1e-10 * scale) {
    std::cerr << "dqplate: closed-form Chebyshev weights deviate from Lagrange weights by "
              << diff / scale << " (relative); using Lagrange weights\n";
    return generic;
  }
  return a;
}

DiffMatrices make_diff_matrices(std::size_t n, GridKind kind) {
  const Grid1D g = make_grid(n, kind);
  return diff_matrices_higher(diff_matrix_first(g), g);
}

const char* to_string(GridKind kind) noexcept {
  switch (kind) {
    case GridKind::uniform: return "uniform";
    case GridKind::chebyshev_mapped: return "chebyshev_mapped";
  }
  return "unknown";
}

}  // namespace dqplate
