#pragma once

#include <stdexcept>
#include <string>

namespace dqplate {

/// Precondition violated by a caller-supplied argument.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two collocation nodes coincide, so Lagrange weights are undefined.
class DegenerateGrid : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The 2x2 slope elimination used by the clamped builder is singular.
class SingularElimination : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An elementwise function was applied outside its domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidMaterial : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The in-plane block system [[H1, H2], [H2, H3]] could not be factorized.
class DecouplingFailure : public std::runtime_error {
 public:
  DecouplingFailure(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  [[nodiscard]] double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

/// The bending operator H4 is singular; usually a boundary set mismatch.
class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dqplate
