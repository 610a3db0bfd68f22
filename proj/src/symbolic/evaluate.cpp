#include "noether/symbolic/evaluate.hpp"

#include <cmath>
#include <sstream>

namespace noether::sym {

std::string Point::to_string() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    if (!values_[i]) continue;
    if (!first) os << ", ";
    first = false;
    os << symbol_name(static_cast<Symbol>(i)) << "=" << *values_[i];
  }
  return os.str();
}

namespace {

constexpr double kPoleThreshold = 1e-300;

double checked(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw EvalError(EvalError::Reason::overflow, std::string("non-finite value in ") + what);
  }
  return v;
}

double reciprocal(double x) {
  if (std::fabs(x) < kPoleThreshold) throw EvalError(EvalError::Reason::pole, "division by zero (pole)");
  return 1.0 / x;
}

double power(double base, const Rational& q) {
  const double exponent = q.get_d();
  if (q.get_den() == 1) {
    if (q < 0) return checked(std::pow(reciprocal(base), -exponent), "power");
    return checked(std::pow(base, exponent), "power");
  }
  if (base < 0) throw EvalError(EvalError::Reason::domain, "fractional power of a negative value");
  if (q < 0) return checked(std::pow(reciprocal(base), -exponent), "power");
  return checked(std::pow(base, exponent), "power");
}

struct Evaluator {
  const Point& point;
  const UnknownResolver& resolver;

  double eval(const Expr& e) const {
    const Node& n = e.node();
    switch (n.kind) {
      case Kind::number:
        return n.value.get_d();
      case Kind::symbol: {
        auto v = point.get(n.symbol);
        if (!v) {
          throw EvalError(EvalError::Reason::unbound_symbol,
                          "unbound symbol '" + std::string(symbol_name(n.symbol)) + "'");
        }
        return *v;
      }
      case Kind::unknown:
        if (!resolver) {
          throw EvalError(EvalError::Reason::unbound_symbol,
                          "unbound unknown function " + unknown_to_string(n.unknown));
        }
        return checked(resolver(n.unknown, point), "unknown function");
      case Kind::add: {
        double sum = 0.0;
        for (const auto& t : n.operands) sum += eval(t);
        return checked(sum, "sum");
      }
      case Kind::mul: {
        double prod = 1.0;
        for (const auto& f : n.operands) prod *= eval(f);
        return checked(prod, "product");
      }
      case Kind::pow:
        return power(eval(n.operands[0]), n.exponent);
      case Kind::func: {
        const double x = eval(n.operands[0]);
        switch (n.fn) {
          case Function::exp:
            return checked(std::exp(x), "exp");
          case Function::ln:
            if (x <= 0) throw EvalError(EvalError::Reason::domain, "ln of a non-positive value");
            return std::log(x);
          case Function::sin:
            return std::sin(x);
          case Function::cos:
            return std::cos(x);
          case Function::tan:
            return std::sin(x) * reciprocal(std::cos(x));
          case Function::sec:
            return reciprocal(std::cos(x));
          case Function::cot:
            return std::cos(x) * reciprocal(std::sin(x));
          case Function::sqrt:
            if (x < 0) throw EvalError(EvalError::Reason::domain, "sqrt of a negative value");
            return std::sqrt(x);
        }
      }
    }
    return 0.0;
  }
};

}  // namespace

double eval_numeric(const Expr& e, const Point& point, const UnknownResolver& resolver) {
  return Evaluator{point, resolver}.eval(e);
}

}  // namespace noether::sym
