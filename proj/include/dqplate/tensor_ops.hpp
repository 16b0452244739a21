#pragma once

#include "dqplate/dq_core.hpp"

#include <cstddef>
#include <functional>

namespace dqplate {

/// Elementwise (Hadamard) product of equally shaped matrices or vectors.
[[nodiscard]] Matrix hadamard(const Matrix& a, const Matrix& b);
[[nodiscard]] Vector hadamard(const Vector& a, const Vector& b);

/// Elementwise power. q = 0 gives the all-ones matrix, q = -1 the Hadamard
/// inverse. Negative q needs nonzero entries; fractional q needs positive ones.
[[nodiscard]] Matrix hadamard_power(const Matrix& a, double q);
[[nodiscard]] Vector hadamard_power(const Vector& a, double q);

/// Applies f to every entry. Throws DomainError when f yields a non-finite
/// value from a finite entry.
[[nodiscard]] Matrix hadamard_map(const std::function<double(double)>& f, const Matrix& a);
[[nodiscard]] Vector hadamard_map(const std::function<double(double)>& f, const Vector& a);

/// SJT product A ◇ V = [a_ij * v_i]: row i of A scaled by v_i, i.e. diag(V) * A.
/// V has one entry per row of A. Costs exactly rows * cols multiplications.
[[nodiscard]] Matrix sjt_post(const Matrix& a, const Vector& v);

/// Jacobians of Hadamard-form expressions in a stacked unknown u.
namespace jacobian_rules {

/// d/du { c ∘ (M u) } = M ◇ c
[[nodiscard]] Matrix scale_rule(const Vector& c, const Matrix& m);
/// d/du { (M u)^∘q } = q M ◇ (M u)^∘(q-1)
[[nodiscard]] Matrix power_rule(const Matrix& m, const Vector& u, double q);
/// d/du { (M1 u) ∘ (M2 u) } = M1 ◇ (M2 u) + M2 ◇ (M1 u)
[[nodiscard]] Matrix product_rule(const Matrix& m1, const Matrix& m2, const Vector& u);
/// d/du { f∘(M u) } = M ◇ f'∘(M u)
[[nodiscard]] Matrix map_rule(const std::function<double(double)>& df, const Matrix& m,
                              const Vector& u);

}  // namespace jacobian_rules

/// Kronecker product; result is (p*n) x (m*q) for a: p x m, b: n x q.
[[nodiscard]] Matrix kron(const Matrix& a, const Matrix& b);

/// Row stacking: vec(X) concatenates the rows of X.
[[nodiscard]] Vector vec(const Matrix& x);
/// Inverse of vec for a rows x cols field.
[[nodiscard]] Matrix unvec(const Vector& v, std::size_t rows, std::size_t cols);

/// Identity of size n, for Kronecker assembly.
[[nodiscard]] Matrix identity(std::size_t n);

}  // namespace dqplate
