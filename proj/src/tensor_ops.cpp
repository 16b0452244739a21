#include "dqplate/tensor_ops.hpp"

#include "dqplate/errors.hpp"

#include <cmath>
#include <string>

namespace dqplate {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidArgument(std::string(op) + ": shape mismatch " + shape(a) + " vs " + shape(b));
  }
}

double checked_pow(double x, double q) {
  if (q < 0.0 && x == 0.0) throw DomainError("hadamard_power: zero entry with negative exponent");
  if (q != std::floor(q) && x <= 0.0) {
    throw DomainError("hadamard_power: non-positive entry with fractional exponent");
  }
  if (q == 0.0) return 1.0;
  return std::pow(x, q);
}

}  // namespace

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  return a.cwiseProduct(b);
}

Vector hadamard(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    throw InvalidArgument("hadamard: length mismatch " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
  }
  return a.cwiseProduct(b);
}

Matrix hadamard_power(const Matrix& a, double q) {
  return a.unaryExpr([q](double x) { return checked_pow(x, q); });
}

Vector hadamard_power(const Vector& a, double q) {
  return a.unaryExpr([q](double x) { return checked_pow(x, q); });
}

Matrix hadamard_map(const std::function<double(double)>& f, const Matrix& a) {
  return a.unaryExpr([&f](double x) {
    const double y = f(x);
    if (std::isfinite(x) && !std::isfinite(y)) {
      throw DomainError("hadamard_map: function undefined at " + std::to_string(x));
    }
    return y;
  });
}

Vector hadamard_map(const std::function<double(double)>& f, const Vector& a) {
  Matrix m = hadamard_map(f, Matrix(a));
  return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix sjt_post(const Matrix& a, const Vector& v) {
  if (a.rows() != v.size()) {
    throw InvalidArgument("sjt_post: matrix " + shape(a) + " needs a vector of length " +
                          std::to_string(a.rows()) + ", got " + std::to_string(v.size()));
  }
  Matrix out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) out(i, j) = a(i, j) * v(i);
  }
  return out;
}

namespace jacobian_rules {

Matrix scale_rule(const Vector& c, const Matrix& m) { return sjt_post(m, c); }

Matrix power_rule(const Matrix& m, const Vector& u, double q) {
  if (m.cols() != u.size()) throw InvalidArgument("power_rule: shape mismatch");
  return q * sjt_post(m, hadamard_power(Vector(m * u), q - 1.0));
}

Matrix product_rule(const Matrix& m1, const Matrix& m2, const Vector& u) {
  require_same_shape(m1, m2, "product_rule");
  if (m1.cols() != u.size()) throw InvalidArgument("product_rule: shape mismatch");
  return sjt_post(m1, m2 * u) + sjt_post(m2, m1 * u);
}

Matrix map_rule(const std::function<double(double)>& df, const Matrix& m, const Vector& u) {
  if (m.cols() != u.size()) throw InvalidArgument("map_rule: shape mismatch");
  return sjt_post(m, hadamard_map(df, Vector(m * u)));
}

}  // namespace jacobian_rules

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector vec(const Matrix& x) {
  Vector v(x.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) v(k++) = x(i, j);
  }
  return v;
}

Matrix unvec(const Vector& v, std::size_t rows, std::size_t cols) {
  if (static_cast<std::size_t>(v.size()) != rows * cols) {
    throw InvalidArgument("unvec: length " + std::to_string(v.size()) + " is not " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  }
  Matrix x(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = v(k++);
  }
  return x;
}

Matrix identity(std::size_t n) {
  return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

}  // namespace dqplate
