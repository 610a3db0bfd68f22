#pragma once

#include <array>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>

#include "noether/symbolic/expression.hpp"

namespace noether::sym {

// Powers of (td, rd, thetad, phid).
struct VelocityMonomial {
  std::array<int, 4> exponents{};

  [[nodiscard]] int degree() const { return exponents[0] + exponents[1] + exponents[2] + exponents[3]; }
  // "1", "td^2", "td*rd", ...
  [[nodiscard]] std::string label() const;
  [[nodiscard]] std::string latex() const;
  [[nodiscard]] Expr to_expr() const;
  friend auto operator<=>(const VelocityMonomial&, const VelocityMonomial&) = default;
};

class NonPolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact decomposition of a velocity polynomial into simplified, velocity-free
// coefficients. Zero coefficients are dropped. Throws NonPolynomialError when
// a velocity appears inside a function, a negative power or a radical.
[[nodiscard]] std::map<VelocityMonomial, Expr> collect_velocity_monomials(const Expr& e);

}  // namespace noether::sym
