#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "noether/symbolic/evaluate.hpp"
#include "noether/symbolic/expression.hpp"
#include "noether/symbolic/sampling.hpp"

namespace noether::sym {

// Canonical form: rational-function normalization over kernels (symbols,
// unknown functions, sin/cos/exp/ln applications, radicals) modulo
// sin^2 + cos^2 = 1 and radical^n = base. tan, sec and cot are rewritten
// through sin and cos; exp(a)exp(b) = exp(a+b); ln(exp(x)) = x and
// exp(k ln x) = x^k. Logarithms and radicals of products are split assuming
// positive arguments.
[[nodiscard]] Expr simplify(const Expr& e);

enum class ZeroStatus { zero, nonzero, undecided };

struct SampleStatistics {
  int samples = 0;            // valid (non-singular) sample points evaluated
  int below_tolerance = 0;    // samples with |value| < 1e-9
  int skipped_singular = 0;   // draws rejected because evaluation hit a pole/domain error
  double max_abs = 0.0;
};

struct ZeroDecision {
  ZeroStatus status = ZeroStatus::undecided;
  bool symbolic = false;             // decided by rewriting to the 0 node
  std::optional<Point> witness;      // for nonzero: a point with |value| >= 1e-6
  double witness_value = 0.0;
  SampleStatistics stats;
  std::uint64_t seed = 0;

  // Rewriting failed but every sample was below 1e-9.
  [[nodiscard]] bool numerically_zero() const {
    return status == ZeroStatus::undecided && stats.samples > 0 &&
           stats.below_tolerance == stats.samples;
  }
  // Zero, symbolically or with all samples below tolerance.
  [[nodiscard]] bool accepted_zero() const {
    return status == ZeroStatus::zero || numerically_zero();
  }
  [[nodiscard]] std::string describe() const;
};

inline constexpr int kZeroSamples = 100;
inline constexpr double kZeroTolerance = 1e-9;
inline constexpr double kNonzeroThreshold = 1e-6;

// Two-tier zero test: rewrite to 0, otherwise evaluate at kZeroSamples seeded
// random non-singular points of `domain`. Unknown functions are replaced by
// seeded random smooth realizations in the numeric tier.
[[nodiscard]] ZeroDecision is_zero(const Expr& e, const SampleDomain& domain = SampleDomain::standard(),
                                   std::uint64_t seed = 42);

// Whether lhs = c * rhs for a nonzero rational constant c, certified by
// is_zero; the constant is estimated numerically and rationalized.
[[nodiscard]] std::optional<Rational> proportionality_constant(
    const Expr& lhs, const Expr& rhs, const SampleDomain& domain = SampleDomain::standard(),
    std::uint64_t seed = 42);

// Best rational approximation with denominator <= max_den.
[[nodiscard]] Rational rationalize(double x, long max_den = 100000);

}  // namespace noether::sym
