#include "dqplate/bc_builder.hpp"
#include "dqplate/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dqplate;

namespace {

Vector random_vector(Eigen::Index n, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Samples of p at the given nodes.
template <class F>
Vector sample(const std::vector<double>& xs, F&& p) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) v(static_cast<Eigen::Index>(i)) = p(xs[i]);
  return v;
}

}  // namespace

TEST(BuildClamped, FivePointEliminationValues) {
  const auto s = build_clamped(make_diff_matrices(5, GridKind::uniform));
  ASSERT_EQ(s.n_interior, 1u);
  EXPECT_NEAR(s.R(1, 0), 0.5625, 1e-12);
  EXPECT_NEAR(s.R(3, 0), 0.5625, 1e-12);
  EXPECT_EQ(s.R(0, 0), 0.0);
  EXPECT_EQ(s.R(4, 0), 0.0);
  EXPECT_NEAR(s.Dbar(0, 0), 384.0, 1e-8);
  EXPECT_NEAR(s.Bbar(0, 0), -16.0, 1e-10);
}

TEST(BuildClamped, SizesAndPreconditions) {
  EXPECT_THROW((void)build_clamped(make_diff_matrices(4, GridKind::uniform)), InvalidArgument);
  for (std::size_t n = 5; n <= 21; ++n) {
    const auto s = build_clamped(make_diff_matrices(n, GridKind::chebyshev_mapped));
    EXPECT_EQ(s.n_interior, n - 4);
    EXPECT_EQ(s.Dbar.rows(), static_cast<Eigen::Index>(n - 4));
    EXPECT_EQ(s.R.rows(), static_cast<Eigen::Index>(n));
  }
}

TEST(BuildClamped, SingularEliminationDetected) {
  DiffMatrices dm = make_diff_matrices(7, GridKind::uniform);
  dm.A(0, 1) = 0.0;
  dm.A(0, 5) = 0.0;
  EXPECT_THROW((void)build_clamped(dm), SingularElimination);
}

TEST(BuildClamped, RecoveredVectorsSatisfyBoundaryConditions) {
  std::mt19937 rng(42);
  for (auto kind : {GridKind::uniform, GridKind::chebyshev_mapped}) {
    for (std::size_t n = 5; n <= 17; ++n) {
      const auto s = build_clamped(make_diff_matrices(n, kind));
      const auto last = static_cast<Eigen::Index>(n) - 1;
      for (int trial = 0; trial < 5; ++trial) {
        const Vector v = random_vector(static_cast<Eigen::Index>(s.n_interior), rng);
        const Vector full = s.R * v;
        EXPECT_EQ(full(0), 0.0);
        EXPECT_EQ(full(last), 0.0);
        const double scale = s.full.A.row(0).norm() * full.norm();
        EXPECT_LT(std::abs(s.full.A.row(0).dot(full)), 1e-10 * scale);
        EXPECT_LT(std::abs(s.full.A.row(last).dot(full)), 1e-10 * scale);
      }
    }
  }
}

TEST(BuildClamped, ReducedMatricesAreRowsOfFullTimesRecovery) {
  const auto s = build_clamped(make_diff_matrices(11, GridKind::chebyshev_mapped));
  const auto m = static_cast<Eigen::Index>(s.n_interior);
  for (int order = 1; order <= 4; ++order) {
    const Matrix& bar = order == 1 ? s.Abar : order == 2 ? s.Bbar : order == 3 ? s.Cbar : s.Dbar;
    const Matrix rebuilt = (s.full.order(order) * s.R).middleRows(2, m);
    EXPECT_LT((bar - rebuilt).cwiseAbs().maxCoeff(), 1e-10 * rebuilt.cwiseAbs().maxCoeff());
  }
}

TEST(BuildClamped, ExactOnClampedPolynomials) {
  // p = x^2 (1-x)^2 x^k satisfies p = p' = 0 at both ends.
  for (std::size_t n = 7; n <= 15; ++n) {
    const auto s = build_clamped(make_diff_matrices(n, GridKind::chebyshev_mapped));
    const auto xs = s.interior_nodes();
    for (int k = 0; k + 4 <= static_cast<int>(n) - 1; ++k) {
      // p = x^(k+2) - 2 x^(k+3) + x^(k+4)
      auto d4 = [k](double x) {
        auto term = [x](int p) {
          double c = 1.0;
          for (int i = 0; i < 4; ++i) c *= p - i;
          return p < 4 ? 0.0 : c * std::pow(x, p - 4);
        };
        return term(k + 2) - 2.0 * term(k + 3) + term(k + 4);
      };
      const Vector v = sample(xs, [k](double x) {
        return std::pow(x, k + 2) - 2.0 * std::pow(x, k + 3) + std::pow(x, k + 4);
      });
      const Vector exact = sample(xs, d4);
      const double err = (s.Dbar * v - exact).cwiseAbs().maxCoeff();
      EXPECT_LT(err, 1e-8 * exact.cwiseAbs().maxCoeff()) << "N=" << n << " k=" << k;
    }
  }
}

TEST(BuildSs, DefinitionalIdentitiesAndSizes) {
  EXPECT_THROW((void)build_ss(make_diff_matrices(3, GridKind::uniform)), InvalidArgument);
  const auto s = build_ss(make_diff_matrices(9, GridKind::chebyshev_mapped));
  EXPECT_EQ(s.n_interior, 7u);
  EXPECT_EQ((s.Dbar - s.Bbar * s.Bbar).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((s.Cbar - s.Abar * s.Bbar).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.R.row(0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.R.row(8).cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildSs, SineModeAtNine) {
  const auto s = build_ss(make_diff_matrices(9, GridKind::chebyshev_mapped));
  const auto xs = s.interior_nodes();
  const double pi = std::numbers::pi;
  const Vector f = sample(xs, [pi](double x) { return std::sin(pi * x); });
  const Vector d4 = s.Dbar * f;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    EXPECT_LT(std::abs(d4(i) - std::pow(pi, 4) * f(i)) / (std::pow(pi, 4) * f(i)), 1e-3);
  }
}

TEST(BuildSs, ExactOnSimplySupportedQuartic) {
  // x (1-x)(1 + x - x^2) = x - 2x^3 + x^4: p = p'' = 0 at both ends, p'''' = 24.
  for (std::size_t n = 5; n <= 15; ++n) {
    const auto s = build_ss(make_diff_matrices(n, GridKind::chebyshev_mapped));
    const Vector v = sample(s.interior_nodes(), [](double x) { return x - 2 * x * x * x + x * x * x * x; });
    const Vector d4 = s.Dbar * v;
    for (Eigen::Index i = 0; i < d4.size(); ++i) EXPECT_NEAR(d4(i), 24.0, 24.0 * 1e-9) << "N=" << n;
  }
}

TEST(BuildSs, CurvatureConditionIsBuiltIntoFourthOrderOperator) {
  // Dbar v is the second derivative of the curvature field extended by zeros
  // at the ends, i.e. w'' = 0 is imposed where the fourth derivative is formed.
  std::mt19937 rng(7);
  const auto s = build_ss(make_diff_matrices(11, GridKind::uniform));
  const Vector v = random_vector(static_cast<Eigen::Index>(s.n_interior), rng);
  const Vector full = s.R * v;
  EXPECT_EQ(full(0), 0.0);
  EXPECT_EQ(full(10), 0.0);
  Vector curvature = s.full.B * full;
  curvature(0) = curvature(10) = 0.0;
  const Vector d4 = (s.full.B * curvature).segment(1, 9);
  EXPECT_LT((s.Dbar * v - d4).cwiseAbs().maxCoeff(), 1e-10 * d4.cwiseAbs().maxCoeff());
}

TEST(DeltaRows, AcceptsSmallOffsetAndRejectsBoundaries) {
  const Grid1D g = make_grid(11, GridKind::chebyshev_mapped);
  const DeltaPlan plan = build_delta_rows(g, 1e-5);
  EXPECT_DOUBLE_EQ(plan.grid.nodes[1], 1e-5);
  EXPECT_DOUBLE_EQ(plan.grid.nodes[9], 1.0 - 1e-5);
  EXPECT_EQ(plan.roles[0], RowRole::deflection);
  EXPECT_EQ(plan.roles[1], RowRole::derivative);
  EXPECT_EQ(plan.roles[5], RowRole::governing);
  EXPECT_EQ(plan.roles[9], RowRole::derivative);
  EXPECT_EQ(plan.roles[10], RowRole::deflection);
  EXPECT_THROW((void)build_delta_rows(g, 0.0), InvalidArgument);
  EXPECT_THROW((void)build_delta_rows(g, -1e-5), InvalidArgument);
  EXPECT_THROW((void)build_delta_rows(g, g.nodes[1]), InvalidArgument);
}

TEST(DeltaRows, ClampedBeamMatchesClosedForm) {
  // w'''' = 1, w = w' = 0 at both ends: w = x^2 (1-x)^2 / 24, center 1/384.
  const DeltaPlan plan = build_delta_rows(make_grid(11, GridKind::chebyshev_mapped), 1e-5);
  const DiffMatrices dm = diff_matrices_higher(diff_matrix_first(plan.grid), plan.grid);
  Matrix k(11, 11);
  Vector rhs = Vector::Zero(11);
  for (Eigen::Index i = 0; i < 11; ++i) {
    switch (plan.roles[static_cast<std::size_t>(i)]) {
      case RowRole::deflection:
        k.row(i).setZero();
        k(i, i) = 1.0;
        break;
      case RowRole::derivative: k.row(i) = dm.A.row(i); break;
      case RowRole::governing:
        k.row(i) = dm.D.row(i);
        rhs(i) = 1.0;
        break;
    }
  }
  const Vector w = k.partialPivLu().solve(rhs);
  EXPECT_NEAR(w(5), 1.0 / 384.0, 1e-4 / 384.0);
}
