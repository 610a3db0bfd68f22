#include "noether/symbolic/expression.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

namespace noether::sym {

namespace {

constexpr std::array<std::string_view, kSymbolCount> kSymbolNames = {
    "s", "t", "r", "theta", "phi", "td", "rd", "thetad", "phid", "alpha", "beta", "a", "b", "p"};

constexpr std::array<std::string_view, kSymbolCount> kSymbolLatex = {
    "s",          "t",        "r",         "\\theta",       "\\phi",
    "\\dot{t}",   "\\dot{r}", "\\dot{\\theta}", "\\dot{\\phi}", "\\alpha",
    "\\beta",     "a",        "b",         "p"};

constexpr std::array<std::string_view, 8> kFunctionNames = {"exp", "ln",  "sin", "cos",
                                                            "tan", "sec", "cot", "sqrt"};

constexpr std::array<std::string_view, 8> kUnknownNames = {"xi",   "eta0", "eta1", "eta2",
                                                           "eta3", "A",    "nu",   "mu"};

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::size_t hash_rational(const Rational& q) {
  return mix(std::hash<std::string>{}(q.get_num().get_str()),
             std::hash<std::string>{}(q.get_den().get_str()));
}

std::size_t compute_hash(const Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911ULL;
  switch (n.kind) {
    case Kind::number:
      return mix(h, hash_rational(n.value));
    case Kind::symbol:
      return mix(h, static_cast<std::size_t>(n.symbol));
    case Kind::unknown: {
      h = mix(h, static_cast<std::size_t>(n.unknown.name));
      h = mix(h, n.unknown.args);
      for (auto d : n.unknown.derivs) h = mix(h, d);
      return h;
    }
    case Kind::pow:
      h = mix(h, hash_rational(n.exponent));
      break;
    case Kind::func:
      h = mix(h, static_cast<std::size_t>(n.fn));
      break;
    default:
      break;
  }
  for (const auto& op : n.operands) h = mix(h, op.hash());
  return h;
}

int kind_rank(Kind k) {
  switch (k) {
    case Kind::number: return 0;
    case Kind::symbol: return 1;
    case Kind::unknown: return 2;
    case Kind::func: return 3;
    case Kind::pow: return 4;
    case Kind::mul: return 5;
    case Kind::add: return 6;
  }
  return 7;
}

int cmp_rational(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int compare_unknown(const UnknownFunction& a, const UnknownFunction& b) {
  if (a.name != b.name) return a.name < b.name ? -1 : 1;
  if (a.args != b.args) return a.args < b.args ? -1 : 1;
  if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
  for (std::size_t i = 0; i < 5; ++i) {
    if (a.derivs[i] != b.derivs[i]) return a.derivs[i] > b.derivs[i] ? -1 : 1;
  }
  return 0;
}

// Base/exponent view so that x and x^2 sort next to each other.
std::pair<const Expr*, Rational> as_power(const Expr& e) {
  if (e.kind() == Kind::pow) return {&e.operands()[0], e.node().exponent};
  return {&e, Rational(1)};
}

int compare_same_kind(const Expr& a, const Expr& b) {
  const Node& x = a.node();
  const Node& y = b.node();
  switch (x.kind) {
    case Kind::number:
      return cmp_rational(x.value, y.value);
    case Kind::symbol:
      return x.symbol == y.symbol ? 0 : (x.symbol < y.symbol ? -1 : 1);
    case Kind::unknown:
      return compare_unknown(x.unknown, y.unknown);
    case Kind::func:
      if (x.fn != y.fn) return x.fn < y.fn ? -1 : 1;
      return compare(x.operands[0], y.operands[0]);
    default:
      break;
  }
  const auto& xs = x.operands;
  const auto& ys = y.operands;
  const std::size_t n = std::min(xs.size(), ys.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(xs[i], ys[i]); c != 0) return c;
  }
  if (xs.size() != ys.size()) return xs.size() < ys.size() ? -1 : 1;
  if (x.kind == Kind::pow) return cmp_rational(x.exponent, y.exponent);
  return 0;
}

}  // namespace

std::string_view symbol_name(Symbol s) { return kSymbolNames[static_cast<std::size_t>(s)]; }
std::string_view symbol_latex(Symbol s) { return kSymbolLatex[static_cast<std::size_t>(s)]; }

std::optional<Symbol> symbol_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    if (kSymbolNames[i] == name) return static_cast<Symbol>(i);
  }
  return std::nullopt;
}

bool is_velocity(Symbol s) { return s >= Symbol::td && s <= Symbol::phid; }
bool is_parameter(Symbol s) { return s >= Symbol::alpha; }

std::optional<std::size_t> point_variable_index(Symbol s) {
  if (s <= Symbol::phi) return static_cast<std::size_t>(s);
  return std::nullopt;
}

std::string_view function_name(Function f) { return kFunctionNames[static_cast<std::size_t>(f)]; }

std::optional<Function> function_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFunctionNames.size(); ++i) {
    if (kFunctionNames[i] == name) return static_cast<Function>(i);
  }
  return std::nullopt;
}

std::string_view unknown_name(UnknownName n) { return kUnknownNames[static_cast<std::size_t>(n)]; }

std::optional<UnknownName> unknown_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kUnknownNames.size(); ++i) {
    if (kUnknownNames[i] == name) return static_cast<UnknownName>(i);
  }
  return std::nullopt;
}

std::size_t UnknownFunction::order() const {
  std::size_t n = 0;
  for (auto d : derivs) n += d;
  return n;
}

// ---------------------------------------------------------------------------
// Construction

Expr Expr::make(Node node) {
  node.hash = compute_hash(node);
  return Expr(std::make_shared<const Node>(std::move(node)));
}

Expr::Expr() : Expr(Rational(0)) {}
Expr::Expr(long value) : Expr(Rational(value)) {}

Expr::Expr(Rational value) {
  value.canonicalize();
  Node n;
  n.kind = Kind::number;
  n.value = std::move(value);
  n.hash = compute_hash(n);
  node_ = std::make_shared<const Node>(std::move(n));
}

Expr::Expr(Symbol s) {
  Node n;
  n.kind = Kind::symbol;
  n.symbol = s;
  n.hash = compute_hash(n);
  node_ = std::make_shared<const Node>(std::move(n));
}

Expr Expr::number(Rational value) { return Expr(std::move(value)); }
Expr Expr::symbol(Symbol s) { return Expr(s); }

Expr Expr::unknown(UnknownFunction f) {
  for (std::size_t i = 0; i < 5; ++i) {
    if (f.derivs[i] != 0 && !f.depends_on(i)) return Expr(0L);
  }
  Node n;
  n.kind = Kind::unknown;
  n.unknown = f;
  return make(std::move(n));
}

Expr Expr::add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  flat.reserve(terms.size());
  Rational constant(0);
  for (auto& t : terms) {
    if (t.kind() == Kind::add) {
      for (const auto& inner : t.operands()) {
        if (inner.is_number()) {
          constant += inner.value();
        } else {
          flat.push_back(inner);
        }
      }
    } else if (t.is_number()) {
      constant += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (constant != 0) flat.insert(flat.begin(), Expr(constant));
  if (flat.empty()) return Expr(0L);
  if (flat.size() == 1) return flat.front();
  Node n;
  n.kind = Kind::add;
  n.operands = std::move(flat);
  return make(std::move(n));
}

Expr Expr::mul(std::vector<Expr> factors) {
  std::vector<Expr> flat;
  flat.reserve(factors.size());
  Rational coefficient(1);
  auto absorb = [&](const Expr& f) {
    if (f.is_number()) {
      coefficient *= f.value();
    } else {
      flat.push_back(f);
    }
  };
  for (const auto& f : factors) {
    if (f.kind() == Kind::mul) {
      for (const auto& inner : f.operands()) absorb(inner);
    } else {
      absorb(f);
    }
  }
  if (coefficient == 0) return Expr(0L);
  if (coefficient != 1) flat.insert(flat.begin(), Expr(coefficient));
  if (flat.empty()) return Expr(1L);
  if (flat.size() == 1) return flat.front();
  Node n;
  n.kind = Kind::mul;
  n.operands = std::move(flat);
  return make(std::move(n));
}

Expr Expr::pow(Expr base, Rational exponent) {
  exponent.canonicalize();
  if (exponent == 0) return Expr(1L);
  if (exponent == 1) return base;
  if (base.is_number() && exponent.get_den() == 1) {
    const Rational& v = base.value();
    if (v == 0) {
      if (exponent < 0) throw std::domain_error("division by zero: 0 raised to a negative power");
      return Expr(0L);
    }
    if (exponent.get_num().fits_slong_p()) {
      const long k = exponent.get_num().get_si();
      mpz_class num;
      mpz_class den;
      mpz_pow_ui(num.get_mpz_t(), v.get_num().get_mpz_t(), static_cast<unsigned long>(std::labs(k)));
      mpz_pow_ui(den.get_mpz_t(), v.get_den().get_mpz_t(), static_cast<unsigned long>(std::labs(k)));
      Rational q = k > 0 ? Rational(num, den) : Rational(den, num);
      return Expr(q);
    }
  }
  if (base.is_number(1)) return base;
  Node n;
  n.kind = Kind::pow;
  n.exponent = std::move(exponent);
  n.operands = {std::move(base)};
  return make(std::move(n));
}

Expr Expr::func(Function f, Expr arg) {
  Node n;
  n.kind = Kind::func;
  n.fn = f;
  n.operands = {std::move(arg)};
  return make(std::move(n));
}

bool Expr::is_number(long v) const { return is_number() && node_->value == v; }

bool Expr::depends_on(Symbol s) const {
  switch (kind()) {
    case Kind::number:
      return false;
    case Kind::symbol:
      return node_->symbol == s;
    case Kind::unknown: {
      auto idx = point_variable_index(s);
      return idx && node_->unknown.depends_on(*idx);
    }
    default:
      return std::any_of(operands().begin(), operands().end(),
                         [s](const Expr& e) { return e.depends_on(s); });
  }
}

bool Expr::contains_unknowns() const {
  if (kind() == Kind::unknown) return true;
  return std::any_of(operands().begin(), operands().end(),
                     [](const Expr& e) { return e.contains_unknowns(); });
}

bool operator==(const Expr& lhs, const Expr& rhs) {
  if (lhs.node_ == rhs.node_) return true;
  if (lhs.hash() != rhs.hash()) return false;
  return compare(lhs, rhs) == 0;
}

int compare(const Expr& lhs, const Expr& rhs) {
  if (&lhs.node() == &rhs.node()) return 0;
  const auto [lb, le] = as_power(lhs);
  const auto [rb, re] = as_power(rhs);
  if (lhs.kind() == Kind::pow || rhs.kind() == Kind::pow) {
    if (int c = compare(*lb, *rb); c != 0) return c;
    return cmp_rational(le, re);
  }
  const int lk = kind_rank(lhs.kind());
  const int rk = kind_rank(rhs.kind());
  if (lk != rk) return lk < rk ? -1 : 1;
  return compare_same_kind(lhs, rhs);
}

// ---------------------------------------------------------------------------
// Operators

Expr operator+(const Expr& lhs, const Expr& rhs) { return Expr::add({lhs, rhs}); }
Expr operator-(const Expr& lhs, const Expr& rhs) { return Expr::add({lhs, -rhs}); }
Expr operator-(const Expr& e) {
  if (e.is_number()) return Expr(Rational(-e.value()));
  return Expr::mul({Expr(-1L), e});
}
Expr operator*(const Expr& lhs, const Expr& rhs) { return Expr::mul({lhs, rhs}); }
Expr operator/(const Expr& lhs, const Expr& rhs) {
  if (rhs.is_zero_node()) throw std::domain_error("division by a literal zero denominator");
  return Expr::mul({lhs, Expr::pow(rhs, Rational(-1))});
}

Expr pow(const Expr& base, long exponent) { return Expr::pow(base, Rational(exponent)); }
Expr pow(const Expr& base, const Rational& exponent) { return Expr::pow(base, exponent); }
Expr exp(const Expr& e) { return Expr::func(Function::exp, e); }
Expr ln(const Expr& e) { return Expr::func(Function::ln, e); }
Expr sin(const Expr& e) { return Expr::func(Function::sin, e); }
Expr cos(const Expr& e) { return Expr::func(Function::cos, e); }
Expr tan(const Expr& e) { return Expr::func(Function::tan, e); }
Expr sec(const Expr& e) { return Expr::func(Function::sec, e); }
Expr cot(const Expr& e) { return Expr::func(Function::cot, e); }
Expr sqrt(const Expr& e) { return Expr::func(Function::sqrt, e); }

Expr unknown(UnknownName name, std::initializer_list<Symbol> args) {
  UnknownFunction f;
  f.name = name;
  for (Symbol s : args) {
    auto idx = point_variable_index(s);
    if (!idx) throw std::invalid_argument("unknown functions depend on point variables only");
    f.args |= static_cast<std::uint8_t>(1U << *idx);
  }
  return Expr::unknown(f);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string rational_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

struct Printer {
  bool latex = false;

  std::string unknown(const UnknownFunction& f) const {
    std::string head(unknown_name(f.name));
    std::string args;
    for (std::size_t i = 0; i < 5; ++i) {
      if (!f.depends_on(i)) continue;
      if (!args.empty()) args += latex ? "," : ",";
      args += latex ? std::string(symbol_latex(kPointVariables[i]))
                    : std::string(symbol_name(kPointVariables[i]));
    }
    if (latex) {
      static constexpr std::array<std::string_view, 8> kLatexHeads = {
          "\\xi", "\\eta^0", "\\eta^1", "\\eta^2", "\\eta^3", "A", "\\nu", "\\mu"};
      std::string out(kLatexHeads[static_cast<std::size_t>(f.name)]);
      std::string sub;
      for (std::size_t i = 0; i < 5; ++i) {
        for (int k = 0; k < f.derivs[i]; ++k) sub += std::string(symbol_latex(kPointVariables[i]));
      }
      if (!sub.empty()) out += "_{" + sub + "}";
      return out;
    }
    std::string out = head + "(" + args + ")";
    if (f.order() == 0) return out;
    std::string vars;
    for (std::size_t i = 0; i < 5; ++i) {
      for (int k = 0; k < f.derivs[i]; ++k) {
        vars += ", ";
        vars += symbol_name(kPointVariables[i]);
      }
    }
    return "diff(" + out + vars + ")";
  }

  std::string atom_or_paren(const Expr& e) const {
    switch (e.kind()) {
      case Kind::symbol:
      case Kind::unknown:
      case Kind::func:
        return print(e);
      case Kind::number:
        if (e.value() >= 0 && e.value().get_den() == 1) return print(e);
        break;
      default:
        break;
    }
    return latex ? "\\left(" + print(e) + "\\right)" : "(" + print(e) + ")";
  }

  std::string power(const Expr& base, const Rational& exponent) const {
    if (exponent == 1) return factor(base);
    if (exponent.get_den() == 2) {
      const std::string root =
          latex ? "\\sqrt{" + print(base) + "}" : "sqrt(" + print(base) + ")";
      if (exponent == Rational(1, 2)) return root;
      return power_text(root, Rational(exponent * 2));
    }
    return power_text(atom_or_paren(base), exponent);
  }

  std::string power_text(const std::string& base, const Rational& exponent) const {
    if (latex) return base + "^{" + rational_string(exponent) + "}";
    if (exponent.get_den() == 1) return base + "^" + rational_string(exponent);
    return base + "^(" + rational_string(exponent) + ")";
  }

  std::string factor(const Expr& e) const {
    if (e.kind() == Kind::add) return latex ? "\\left(" + print(e) + "\\right)" : "(" + print(e) + ")";
    if (e.kind() == Kind::mul) return latex ? "\\left(" + print(e) + "\\right)" : "(" + print(e) + ")";
    if (e.is_number() && (e.value() < 0 || e.value().get_den() != 1)) return atom_or_paren(e);
    return print(e);
  }

  // Product split into a coefficient and numerator/denominator factor lists.
  std::string product(const Expr& e) const {
    Rational coefficient(1);
    std::vector<std::string> num;
    std::vector<std::string> den;
    auto visit = [&](const Expr& f) {
      if (f.is_number()) {
        coefficient *= f.value();
      } else if (f.kind() == Kind::pow && f.node().exponent < 0) {
        den.push_back(power(f.operands()[0], Rational(-f.node().exponent)));
      } else {
        num.push_back(factor(f));
      }
    };
    if (e.kind() == Kind::mul) {
      for (const auto& f : e.operands()) visit(f);
    } else {
      visit(e);
    }
    std::string sign = coefficient < 0 ? "-" : "";
    const Rational mag = abs(coefficient);
    const std::string cnum = mag.get_num().get_str();
    const std::string cden = mag.get_den().get_str();
    if (cnum != "1" || num.empty()) num.insert(num.begin(), cnum);
    if (cden != "1") den.insert(den.begin(), cden);
    const std::string sep = latex ? " " : "*";
    auto join = [&](const std::vector<std::string>& parts) {
      std::string out;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
      }
      return out;
    };
    if (den.empty()) return sign + join(num);
    if (latex) return sign + "\\frac{" + join(num) + "}{" + join(den) + "}";
    std::string d = join(den);
    if (den.size() > 1) d = "(" + d + ")";
    return sign + join(num) + "/" + d;
  }

  static bool negative_term(const Expr& e) {
    if (e.is_number()) return e.value() < 0;
    if (e.kind() == Kind::mul && e.operands().front().is_number()) {
      return e.operands().front().value() < 0;
    }
    return false;
  }

  std::string print(const Expr& e) const {
    const Node& n = e.node();
    switch (n.kind) {
      case Kind::number: {
        if (latex && n.value.get_den() != 1) {
          const std::string sign = n.value < 0 ? "-" : "";
          return sign + "\\frac{" + Rational(abs(n.value)).get_num().get_str() + "}{" +
                 n.value.get_den().get_str() + "}";
        }
        return rational_string(n.value);
      }
      case Kind::symbol:
        return std::string(latex ? symbol_latex(n.symbol) : symbol_name(n.symbol));
      case Kind::unknown:
        return unknown(n.unknown);
      case Kind::func: {
        if (latex) {
          if (n.fn == Function::sqrt) return "\\sqrt{" + print(n.operands[0]) + "}";
          if (n.fn == Function::exp) return "e^{" + print(n.operands[0]) + "}";
          return "\\" + std::string(function_name(n.fn)) + "\\left(" + print(n.operands[0]) +
                 "\\right)";
        }
        return std::string(function_name(n.fn)) + "(" + print(n.operands[0]) + ")";
      }
      case Kind::pow:
        if (n.exponent < 0) return product(e);
        return power(n.operands[0], n.exponent);
      case Kind::mul:
        return product(e);
      case Kind::add: {
        std::string out;
        for (std::size_t i = 0; i < n.operands.size(); ++i) {
          const Expr& term = n.operands[i];
          if (negative_term(term)) {
            out += i ? " - " : "-";
            out += print(-term);
          } else {
            if (i) out += " + ";
            out += print(term);
          }
        }
        return out;
      }
    }
    return {};
  }
};

}  // namespace

std::string to_string(const Expr& e) { return Printer{false}.print(e); }
std::string to_latex(const Expr& e) { return Printer{true}.print(e); }
std::string unknown_to_string(const UnknownFunction& f) { return Printer{false}.unknown(f); }

std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << to_string(e); }

// ---------------------------------------------------------------------------
// Traversal

Expr substitute(const Expr& e, const std::vector<std::pair<Symbol, Expr>>& bindings) {
  switch (e.kind()) {
    case Kind::number:
    case Kind::unknown:
      return e;
    case Kind::symbol:
      for (const auto& [s, v] : bindings) {
        if (s == e.node().symbol) return v;
      }
      return e;
    case Kind::add:
    case Kind::mul: {
      std::vector<Expr> ops;
      ops.reserve(e.operands().size());
      for (const auto& op : e.operands()) ops.push_back(substitute(op, bindings));
      return e.kind() == Kind::add ? Expr::add(std::move(ops)) : Expr::mul(std::move(ops));
    }
    case Kind::pow:
      return Expr::pow(substitute(e.operands()[0], bindings), e.node().exponent);
    case Kind::func:
      return Expr::func(e.node().fn, substitute(e.operands()[0], bindings));
  }
  return e;
}

namespace {

void collect_symbols(const Expr& e, std::set<Symbol>& out) {
  if (e.kind() == Kind::symbol) {
    out.insert(e.node().symbol);
    return;
  }
  if (e.kind() == Kind::unknown) {
    for (std::size_t i = 0; i < 5; ++i) {
      if (e.node().unknown.depends_on(i)) out.insert(kPointVariables[i]);
    }
    return;
  }
  for (const auto& op : e.operands()) collect_symbols(op, out);
}

void collect_unknowns(const Expr& e, std::vector<UnknownFunction>& out) {
  if (e.kind() == Kind::unknown) {
    if (std::find(out.begin(), out.end(), e.node().unknown) == out.end()) {
      out.push_back(e.node().unknown);
    }
    return;
  }
  for (const auto& op : e.operands()) collect_unknowns(op, out);
}

}  // namespace

std::vector<Symbol> free_symbols(const Expr& e) {
  std::set<Symbol> out;
  collect_symbols(e, out);
  return {out.begin(), out.end()};
}

std::vector<UnknownFunction> unknown_functions(const Expr& e) {
  std::vector<UnknownFunction> out;
  collect_unknowns(e, out);
  return out;
}

}  // namespace noether::sym
