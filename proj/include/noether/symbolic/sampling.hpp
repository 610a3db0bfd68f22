#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>

#include "noether/symbolic/evaluate.hpp"
#include "noether/symbolic/expression.hpp"

namespace noether::sym {

// SplitMix64 generator with an explicit, portable mapping to doubles, so a
// seed reproduces the same sample points on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform(double lo, double hi);  // [lo, hi)
  long integer(long lo, long hi);        // [lo, hi]

 private:
  std::uint64_t state_;
};

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Where random sample points are drawn. Parameters are fixed, not sampled.
struct SampleDomain {
  std::array<Interval, kSymbolCount> ranges{};
  std::array<std::optional<double>, kSymbolCount> fixed{};

  // s in [0.1,2], t in [-1,1], r in [0.5,5], theta in [0.3, pi-0.3],
  // phi in [0, 2pi), velocities in [-1,1]; alpha=1, beta=1, a=1, b=2, p=1/4.
  static SampleDomain standard();

  SampleDomain& with_range(Symbol s, Interval i) {
    ranges[static_cast<std::size_t>(s)] = i;
    return *this;
  }
  SampleDomain& with_fixed(Symbol s, double v) {
    fixed[static_cast<std::size_t>(s)] = v;
    return *this;
  }
  [[nodiscard]] Point draw(Rng& rng) const;
};

// Random smooth realizations of unknown functions, used to sample
// expressions that contain xi, eta^i, A, nu or mu. Each (name, argument set)
// gets one random function; derivative nodes evaluate its exact derivatives.
class RandomRealizations {
 public:
  explicit RandomRealizations(std::uint64_t seed) : seed_(seed) {}
  double evaluate(const UnknownFunction& f, const Point& point);
  [[nodiscard]] UnknownResolver resolver();
  // The base function chosen for (name, args).
  Expr base_function(UnknownName name, std::uint8_t args);

 private:
  std::uint64_t seed_;
  std::map<std::pair<int, int>, Expr> bases_;
  std::map<std::pair<std::pair<int, int>, std::array<std::uint8_t, 5>>, Expr> derivatives_;
};

}  // namespace noether::sym
