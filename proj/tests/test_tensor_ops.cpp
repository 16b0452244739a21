#include "dqplate/errors.hpp"
#include "dqplate/tensor_ops.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace dqplate;
namespace jr = dqplate::jacobian_rules;

namespace {

Matrix random_matrix(Eigen::Index r, Eigen::Index c, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = dist(rng);
  }
  return m;
}

Matrix central_differences(const std::function<Vector(const Vector&)>& f, const Vector& u) {
  Matrix jac(f(u).size(), u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(u(j)));
    Vector up = u, um = u;
    up(j) += h;
    um(j) -= h;
    jac.col(j) = (f(up) - f(um)) / (2 * h);
  }
  return jac;
}

double max_rel_error(const Matrix& got, const Matrix& want) {
  return (got - want).cwiseAbs().maxCoeff() / want.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Hadamard, SmallProduct) {
  Matrix a(2, 2), b(2, 2), expected(2, 2);
  a << 1, 2, 3, 4;
  b << 5, 6, 7, 8;
  expected << 5, 12, 21, 32;
  EXPECT_EQ(hadamard(a, b), expected);
  EXPECT_EQ(hadamard(a, Matrix::Ones(2, 2)), a);
  EXPECT_THROW((void)hadamard(a, Matrix::Ones(2, 3)), InvalidArgument);
}

TEST(Hadamard, AlgebraicIdentitiesOnRandomMatrices) {
  std::mt19937 rng(1);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = random_matrix(4, 5, rng);
    const Matrix b = random_matrix(4, 5, rng);
    const Matrix c = random_matrix(4, 5, rng);
    const double k = std::uniform_real_distribution<double>(-3, 3)(rng);
    EXPECT_EQ(hadamard(a, b), hadamard(b, a));
    EXPECT_LT((k * hadamard(a, b) - hadamard(Matrix(k * a), b)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((hadamard(Matrix(a + b), c) - (hadamard(a, c) + hadamard(b, c))).cwiseAbs().maxCoeff(),
              1e-15);
  }
}

TEST(HadamardPower, PowersAndInverse) {
  Matrix a(2, 2), sq(2, 2);
  a << 1, 2, 3, 4;
  sq << 1, 4, 9, 16;
  EXPECT_EQ(hadamard_power(a, 2.0), sq);
  EXPECT_EQ(hadamard_power(a, 0.0), Matrix::Ones(2, 2));
  EXPECT_LT((hadamard(a, hadamard_power(a, -1.0)) - Matrix::Ones(2, 2)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HadamardPower, DomainErrors) {
  Matrix z(1, 2);
  z << 0, 1;
  EXPECT_THROW((void)hadamard_power(z, -1.0), DomainError);
  Matrix neg(1, 1);
  neg << -2;
  EXPECT_THROW((void)hadamard_power(neg, 0.5), DomainError);
  EXPECT_EQ(hadamard_power(neg, 3.0)(0, 0), -8.0);
}

TEST(HadamardMap, ElementwiseFunctions) {
  Matrix a(1, 2);
  a << 0, std::numbers::pi / 2;
  const Matrix s = hadamard_map([](double x) { return std::sin(x); }, a);
  EXPECT_NEAR(s(0, 0), 0.0, 1e-16);
  EXPECT_NEAR(s(0, 1), 1.0, 1e-16);
  EXPECT_EQ(hadamard_map([](double x) { return std::exp(x); }, Matrix(Matrix::Zero(3, 3))), Matrix::Ones(3, 3));
  std::mt19937 rng(3);
  const Matrix r = random_matrix(3, 4, rng);
  EXPECT_EQ(hadamard_map([](double x) { return x * x; }, r), hadamard_power(r, 2.0));
  EXPECT_THROW((void)hadamard_map([](double x) { return std::log(x); }, Matrix(-Matrix::Ones(2, 2))),
               DomainError);
}

TEST(SjtProduct, ScalesRows) {
  Matrix a(2, 2), expected(2, 2);
  a << 1, 2, 3, 4;
  Vector v(2);
  v << 10, 100;
  expected << 10, 20, 300, 400;
  EXPECT_EQ(sjt_post(a, v), expected);
  EXPECT_EQ(sjt_post(a, Vector::Ones(2)), a);
  EXPECT_THROW((void)sjt_post(a, Vector::Ones(3)), InvalidArgument);
}

TEST(SjtProduct, EqualsDiagonalProduct) {
  std::mt19937 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = random_matrix(5, 5, rng);
    const Vector v = random_matrix(5, 1, rng);
    const Matrix dense = Matrix(v.asDiagonal()) * a;
    EXPECT_LE((sjt_post(a, v) - dense).cwiseAbs().maxCoeff(), 1e-14 * dense.cwiseAbs().maxCoeff());
  }
}

TEST(JacobianRules, MatchFiniteDifferences) {
  std::mt19937 rng(11);
  for (Eigen::Index n : {3, 9, 25}) {
    const Matrix m1 = random_matrix(n, n, rng);
    const Matrix m2 = random_matrix(n, n, rng);
    const Vector c = random_matrix(n, 1, rng);
    const Vector u = random_matrix(n, 1, rng);

    EXPECT_LT(max_rel_error(jr::scale_rule(c, m1),
                            central_differences([&](const Vector& x) { return Vector(c.cwiseProduct(m1 * x)); }, u)),
              1e-7);
    EXPECT_LT(max_rel_error(jr::power_rule(m1, u, 3.0),
                            central_differences([&](const Vector& x) { return hadamard_power(Vector(m1 * x), 3.0); }, u)),
              1e-7);
    EXPECT_LT(max_rel_error(jr::product_rule(m1, m2, u),
                            central_differences([&](const Vector& x) { return Vector((m1 * x).cwiseProduct(m2 * x)); }, u)),
              1e-7);
    auto sin_f = [](double x) { return std::sin(x); };
    auto cos_f = [](double x) { return std::cos(x); };
    EXPECT_LT(max_rel_error(jr::map_rule(cos_f, m1, u),
                            central_differences([&](const Vector& x) { return hadamard_map(sin_f, Vector(m1 * x)); }, u)),
              1e-7);
    auto exp_f = [](double x) { return std::exp(x); };
    EXPECT_LT(max_rel_error(jr::map_rule(exp_f, m1, u),
                            central_differences([&](const Vector& x) { return hadamard_map(exp_f, Vector(m1 * x)); }, u)),
              1e-7);
  }
}

TEST(JacobianRules, AlgebraicConsistency) {
  std::mt19937 rng(13);
  const Matrix m = random_matrix(6, 6, rng);
  const Vector u = random_matrix(6, 1, rng);
  const Matrix twice = 2.0 * sjt_post(m, m * u);
  EXPECT_LT((jr::product_rule(m, m, u) - twice).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((jr::power_rule(m, u, 2.0) - twice).cwiseAbs().maxCoeff(), 1e-14);
  const Matrix sin_rule = jr::map_rule([](double x) { return std::cos(x); }, m, u);
  EXPECT_EQ(sin_rule, sjt_post(m, hadamard_map([](double x) { return std::cos(x); }, Vector(m * u))));
}

TEST(Kronecker, VecAndBlockStructure) {
  Matrix x(2, 2);
  x << 1, 2, 3, 4;
  Vector expected(4);
  expected << 1, 2, 3, 4;
  EXPECT_EQ(vec(x), expected);
  EXPECT_EQ(unvec(vec(x), 2, 2), x);
  EXPECT_THROW((void)unvec(expected, 3, 2), InvalidArgument);

  std::mt19937 rng(17);
  const Matrix b = random_matrix(3, 2, rng);
  const Matrix k = kron(identity(2), b);
  EXPECT_EQ(k.block(0, 0, 3, 2), b);
  EXPECT_EQ(k.block(3, 2, 3, 2), b);
  EXPECT_EQ(k.block(0, 2, 3, 2), Matrix::Zero(3, 2));
}

TEST(Kronecker, RowStackingIdentities) {
  std::mt19937 rng(19);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = random_matrix(3, 4, rng);
    const Matrix x = random_matrix(4, 5, rng);
    const Matrix b = random_matrix(5, 2, rng);
    const Vector lhs = vec(a * x * b);
    const Vector rhs = kron(a, b.transpose()) * vec(x);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-13);

    const Matrix sq = random_matrix(5, 5, rng);
    EXPECT_LT((vec(a * x) - kron(a, identity(5)) * vec(x)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((vec(x * sq) - kron(identity(4), sq.transpose()) * vec(x)).cwiseAbs().maxCoeff(), 1e-13);
    const Matrix a4 = random_matrix(4, 4, rng);
    EXPECT_LT((vec(a4 * x + x * sq) -
               (kron(a4, identity(5)) + kron(identity(4), sq.transpose())) * vec(x))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-13);
  }
}

TEST(Kronecker, VecRoundTripIsExact) {
  std::mt19937 rng(23);
  for (int t = 0; t < 10; ++t) {
    const Matrix x = random_matrix(1 + t % 4, 2 + t % 3, rng);
    EXPECT_EQ(unvec(vec(x), static_cast<std::size_t>(x.rows()), static_cast<std::size_t>(x.cols())), x);
  }
}
