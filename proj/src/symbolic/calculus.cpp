#include "noether/symbolic/calculus.hpp"

namespace noether::sym {

Expr differentiate(const Expr& e, Symbol v) {
  if (!e.depends_on(v)) return Expr(0L);
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::number:
      return Expr(0L);
    case Kind::symbol:
      return Expr(n.symbol == v ? 1L : 0L);
    case Kind::unknown: {
      UnknownFunction f = n.unknown;
      const auto idx = point_variable_index(v);
      ++f.derivs[*idx];
      return Expr::unknown(f);
    }
    case Kind::add: {
      std::vector<Expr> terms;
      for (const auto& t : n.operands) {
        if (t.depends_on(v)) terms.push_back(differentiate(t, v));
      }
      return Expr::add(std::move(terms));
    }
    case Kind::mul: {
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < n.operands.size(); ++i) {
        if (!n.operands[i].depends_on(v)) continue;
        std::vector<Expr> factors;
        factors.reserve(n.operands.size());
        for (std::size_t j = 0; j < n.operands.size(); ++j) {
          factors.push_back(i == j ? differentiate(n.operands[j], v) : n.operands[j]);
        }
        terms.push_back(Expr::mul(std::move(factors)));
      }
      return Expr::add(std::move(terms));
    }
    case Kind::pow: {
      const Expr& base = n.operands[0];
      return Expr::mul({Expr(n.exponent), Expr::pow(base, Rational(n.exponent - 1)),
                        differentiate(base, v)});
    }
    case Kind::func: {
      const Expr& u = n.operands[0];
      const Expr du = differentiate(u, v);
      switch (n.fn) {
        case Function::exp:
          return e * du;
        case Function::ln:
          return du / u;
        case Function::sin:
          return cos(u) * du;
        case Function::cos:
          return -(sin(u) * du);
        case Function::tan:
          return pow(sec(u), 2) * du;
        case Function::sec:
          return Expr::mul({sec(u), tan(u), du});
        case Function::cot:
          return -(du / pow(sin(u), 2));
        case Function::sqrt:
          return du / (Expr(2L) * e);
      }
    }
  }
  return Expr(0L);
}

Expr replace_unknowns(const Expr& e, const UnknownReplacer& replace) {
  switch (e.kind()) {
    case Kind::number:
    case Kind::symbol:
      return e;
    case Kind::unknown: {
      auto out = replace(e.node().unknown);
      return out ? *out : e;
    }
    case Kind::add:
    case Kind::mul: {
      std::vector<Expr> ops;
      ops.reserve(e.operands().size());
      for (const auto& op : e.operands()) ops.push_back(replace_unknowns(op, replace));
      return e.kind() == Kind::add ? Expr::add(std::move(ops)) : Expr::mul(std::move(ops));
    }
    case Kind::pow:
      return Expr::pow(replace_unknowns(e.operands()[0], replace), e.node().exponent);
    case Kind::func:
      return Expr::func(e.node().fn, replace_unknowns(e.operands()[0], replace));
  }
  return e;
}

Expr substitute_unknown(const Expr& e, UnknownName name, const Expr& replacement) {
  return replace_unknowns(e, [&](const UnknownFunction& f) -> std::optional<Expr> {
    if (f.name != name) return std::nullopt;
    Expr out = replacement;
    for (std::size_t i = 0; i < 5; ++i) {
      for (int k = 0; k < f.derivs[i]; ++k) out = differentiate(out, kPointVariables[i]);
    }
    return out;
  });
}

}  // namespace noether::sym
