#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "noether/symbolic/expression.hpp"

namespace noether::sym {

// Binding of symbols to reals.
class Point {
 public:
  Point() = default;
  Point& set(Symbol s, double v) {
    values_[static_cast<std::size_t>(s)] = v;
    return *this;
  }
  [[nodiscard]] std::optional<double> get(Symbol s) const {
    return values_[static_cast<std::size_t>(s)];
  }
  [[nodiscard]] bool has(Symbol s) const { return values_[static_cast<std::size_t>(s)].has_value(); }
  [[nodiscard]] std::string to_string() const;

 private:
  std::array<std::optional<double>, kSymbolCount> values_{};
};

// Evaluates an unknown-function node (with its derivative multi-index) at a point.
using UnknownResolver = std::function<double(const UnknownFunction&, const Point&)>;

class EvalError : public std::runtime_error {
 public:
  enum class Reason { unbound_symbol, pole, domain, overflow };
  EvalError(Reason reason, const std::string& message)
      : std::runtime_error(message), reason_(reason) {}
  [[nodiscard]] Reason reason() const { return reason_; }

 private:
  Reason reason_;
};

// IEEE double evaluation. Division by |x| < 1e-300 raises a pole error;
// non-finite results raise an overflow error; ln/sqrt/fractional powers of
// non-positive values raise a domain error.
[[nodiscard]] double eval_numeric(const Expr& e, const Point& point,
                                  const UnknownResolver& resolver = {});

}  // namespace noether::sym
