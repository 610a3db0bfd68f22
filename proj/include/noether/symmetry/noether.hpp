#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noether/spacetime/metric.hpp"
#include "noether/symbolic/monomials.hpp"
#include "noether/symbolic/simplify.hpp"
#include "noether/symmetry/generator.hpp"

namespace noether::symmetry {

using spacetime::Metric;

// D = d_s + td d_t + rd d_r + thetad d_theta + phid d_phi
[[nodiscard]] Expr total_derivative(const Expr& e);

// eta^i_{,s} = D(eta^i) - u'^i D(xi)
[[nodiscard]] std::array<Expr, 4> prolong(const Generator& g);

// X^(1) L + D(xi) L - D(A), simplified.
[[nodiscard]] Expr noether_residual(const Metric& m, const Generator& g);

struct VerificationReport {
  std::string generator;
  sym::ZeroDecision decision;
  Expr residual;

  [[nodiscard]] bool verified() const { return decision.accepted_zero(); }
  // "symbolic-zero", "numeric-zero", "nonzero" or "undecided".
  [[nodiscard]] std::string status() const;
};

[[nodiscard]] VerificationReport verify_symmetry(const Metric& m, const Generator& g, std::uint64_t seed = 42);

struct KillingReport {
  bool killing = true;
  std::vector<std::pair<std::pair<int, int>, sym::ZeroDecision>> equations;
  std::optional<sym::Point> witness;
  std::string failing;  // first failing component, e.g. "(r,r)"
};

// The ten Killing equations of the vector part. Requires xi = 0, a constant
// gauge and no s-dependence; throws std::invalid_argument otherwise.
[[nodiscard]] KillingReport killing_check(const Metric& m, const Generator& g, std::uint64_t seed = 42);

struct DeterminingEquation {
  sym::VelocityMonomial monomial;
  Expr coefficient;  // raw coefficient of the monomial in the residual
  Expr normalized;   // coefficient divided by the factor of its leading unknown
  std::vector<sym::VelocityMonomial> duplicates;  // other monomials giving the same equation
};

struct DeterminingSystem {
  Metric family;
  std::map<sym::VelocityMonomial, Expr> equations;  // every nonzero coefficient
  std::vector<DeterminingEquation> nonredundant;    // deduplicated, in monomial order

  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] std::string to_latex() const;
};

// Residual with xi, eta^i and A unknown, split by velocity monomials.
[[nodiscard]] DeterminingSystem determining_system(const Metric& family);
[[nodiscard]] DeterminingSystem determining_system(spacetime::LambdaBranch branch);

// Substitute the generator (and, if given, the profiles of `m`) into every
// equation and zero-test the results.
[[nodiscard]] std::map<sym::VelocityMonomial, sym::ZeroDecision> substitute_into_system(
    const DeterminingSystem& ds, const Generator& g, const std::optional<Metric>& m = std::nullopt,
    std::uint64_t seed = 42);

struct FirstIntegral {
  Expr expr;
  std::string source;
  std::string note;
};

// I = A - (xi L + (eta^i - xi u'^i) dL/du'^i). A note is attached when the
// generator does not verify.
[[nodiscard]] FirstIntegral first_integral(const Metric& m, const Generator& g, std::uint64_t seed = 42);

}  // namespace noether::symmetry
