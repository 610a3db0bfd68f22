#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "noether/symbolic/sampling.hpp"
#include "noether/symbolic/simplify.hpp"
#include "noether/symmetry/generator.hpp"

namespace noether::symmetry {

// [X, Y]^a = X(Y^a) - Y(X^a) over (s, t, r, theta, phi); the gauge is 0.
[[nodiscard]] Generator lie_bracket(const Generator& x, const Generator& y);

// Gauge that makes [X, Y] a Noether symmetry when X and Y are: X(A_Y) - Y(A_X).
[[nodiscard]] Expr bracket_gauge(const Generator& x, const Generator& y);

class ClosureError : public std::runtime_error {
 public:
  ClosureError(const std::string& message, std::string left, std::string right)
      : std::runtime_error(message), left_(std::move(left)), right_(std::move(right)) {}
  [[nodiscard]] const std::string& left() const { return left_; }
  [[nodiscard]] const std::string& right() const { return right_; }

 private:
  std::string left_;
  std::string right_;
};

class DependentBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommutatorTable {
  std::vector<std::string> names;
  // constants[i][j][k] = c^k_{ij} with [X_i, X_j] = sum_k c^k_{ij} X_k
  std::vector<std::vector<std::vector<sym::Rational>>> constants;
  // Whether each bracket identity was certified by rewriting (else numerically).
  std::vector<std::vector<bool>> symbolic;
  double jacobi_residual = 0.0;

  [[nodiscard]] const std::vector<sym::Rational>& bracket(std::size_t i, std::size_t j) const {
    return constants[i][j];
  }
  // Nonzero relations "[X_i, X_j] = c X_k + ..." for i < j.
  [[nodiscard]] std::vector<std::string> relations() const;
};

// Structure constants of a basis. Independence is checked at 5 generic
// points (matrix rank); each bracket is solved pointwise, its coefficients
// rationalized and the identity certified with is_zero. Throws
// DependentBasisError or ClosureError.
[[nodiscard]] CommutatorTable commutator_table(const std::vector<Generator>& basis,
                                               const sym::SampleDomain& domain = sym::SampleDomain::standard(),
                                               std::uint64_t seed = 42);

}  // namespace noether::symmetry
