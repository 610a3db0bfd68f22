#include "noether/symbolic/monomials.hpp"

#include "noether/symbolic/simplify.hpp"

namespace noether::sym {

std::string VelocityMonomial::label() const {
  std::string out;
  for (std::size_t i = 0; i < 4; ++i) {
    if (exponents[i] == 0) continue;
    if (!out.empty()) out += "*";
    out += symbol_name(kVelocities[i]);
    if (exponents[i] > 1) out += "^" + std::to_string(exponents[i]);
  }
  return out.empty() ? "1" : out;
}

std::string VelocityMonomial::latex() const {
  std::string out;
  for (std::size_t i = 0; i < 4; ++i) {
    if (exponents[i] == 0) continue;
    if (!out.empty()) out += " ";
    out += symbol_latex(kVelocities[i]);
    if (exponents[i] > 1) out += "^{" + std::to_string(exponents[i]) + "}";
  }
  return out.empty() ? "1" : out;
}

Expr VelocityMonomial::to_expr() const {
  std::vector<Expr> factors;
  for (std::size_t i = 0; i < 4; ++i) {
    if (exponents[i] > 0) factors.push_back(Expr::pow(Expr(kVelocities[i]), Rational(exponents[i])));
  }
  return Expr::mul(std::move(factors));
}

namespace {

using Terms = std::map<VelocityMonomial, Expr>;

bool has_velocity(const Expr& e) {
  for (Symbol v : kVelocities) {
    if (e.depends_on(v)) return true;
  }
  return false;
}

Terms multiply(const Terms& a, const Terms& b) {
  Terms out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      VelocityMonomial m;
      for (std::size_t i = 0; i < 4; ++i) m.exponents[i] = ma.exponents[i] + mb.exponents[i];
      auto [it, inserted] = out.emplace(m, ca * cb);
      if (!inserted) it->second = it->second + ca * cb;
    }
  }
  return out;
}

Terms expand(const Expr& e) {
  if (!has_velocity(e)) return {{VelocityMonomial{}, e}};
  switch (e.kind()) {
    case Kind::symbol: {
      VelocityMonomial m;
      for (std::size_t i = 0; i < 4; ++i) {
        if (e.node().symbol == kVelocities[i]) m.exponents[i] = 1;
      }
      return {{m, Expr(1L)}};
    }
    case Kind::add: {
      Terms out;
      for (const auto& t : e.operands()) {
        for (auto& [m, c] : expand(t)) {
          auto [it, inserted] = out.emplace(m, c);
          if (!inserted) it->second = it->second + c;
        }
      }
      return out;
    }
    case Kind::mul: {
      Terms out{{VelocityMonomial{}, Expr(1L)}};
      for (const auto& f : e.operands()) out = multiply(out, expand(f));
      return out;
    }
    case Kind::pow: {
      const Rational& k = e.node().exponent;
      if (k.get_den() != 1 || k < 0) {
        throw NonPolynomialError("velocity under a negative or fractional power: " + to_string(e));
      }
      const Terms base = expand(e.operands()[0]);
      Terms out{{VelocityMonomial{}, Expr(1L)}};
      for (long i = 0; i < k.get_num().get_si(); ++i) out = multiply(out, base);
      return out;
    }
    default:
      throw NonPolynomialError("velocity inside a function: " + to_string(e));
  }
}

}  // namespace

std::map<VelocityMonomial, Expr> collect_velocity_monomials(const Expr& e) {
  std::map<VelocityMonomial, Expr> out;
  for (auto& [m, c] : expand(e)) {
    Expr s = simplify(c);
    if (has_velocity(s)) {
      throw NonPolynomialError("velocity dependence survives in a coefficient: " + to_string(s));
    }
    if (!s.is_zero_node()) out.emplace(m, s);
  }
  return out;
}

}  // namespace noether::sym
