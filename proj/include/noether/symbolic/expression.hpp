#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace noether::sym {

using Rational = mpq_class;

// Fixed symbol alphabet. Enumeration order is the canonical tie-break order:
// s < t < r < theta < phi < velocities < parameters.
enum class Symbol : std::uint8_t {
  s,
  t,
  r,
  theta,
  phi,
  td,
  rd,
  thetad,
  phid,
  alpha,
  beta,
  a,
  b,
  p,
};

inline constexpr std::size_t kSymbolCount = 14;

// The spacetime coordinates in slot order (t, r, theta, phi) and the matching
// velocities.
inline constexpr std::array<Symbol, 4> kCoordinates = {Symbol::t, Symbol::r, Symbol::theta,
                                                       Symbol::phi};
inline constexpr std::array<Symbol, 4> kVelocities = {Symbol::td, Symbol::rd, Symbol::thetad,
                                                      Symbol::phid};
// Independent variables of a point symmetry: (s, t, r, theta, phi).
inline constexpr std::array<Symbol, 5> kPointVariables = {Symbol::s, Symbol::t, Symbol::r,
                                                          Symbol::theta, Symbol::phi};

[[nodiscard]] std::string_view symbol_name(Symbol s);
[[nodiscard]] std::string_view symbol_latex(Symbol s);
[[nodiscard]] std::optional<Symbol> symbol_from_name(std::string_view name);
[[nodiscard]] bool is_velocity(Symbol s);
[[nodiscard]] bool is_parameter(Symbol s);
// Index 0..4 of a point variable, or nullopt for velocities/parameters.
[[nodiscard]] std::optional<std::size_t> point_variable_index(Symbol s);

enum class Function : std::uint8_t { exp, ln, sin, cos, tan, sec, cot, sqrt };

[[nodiscard]] std::string_view function_name(Function f);
[[nodiscard]] std::optional<Function> function_from_name(std::string_view name);

// Names of the unknown functions: the symmetry coefficients and gauge, plus the
// metric profiles when they are left arbitrary.
enum class UnknownName : std::uint8_t { xi, eta0, eta1, eta2, eta3, gauge, nu, mu };

[[nodiscard]] std::string_view unknown_name(UnknownName n);
[[nodiscard]] std::optional<UnknownName> unknown_from_name(std::string_view name);

// An unknown function of a subset of (s,t,r,theta,phi) together with a
// partial-derivative multi-index. The multi-index is an unordered count vector,
// so mixed partials commute by construction.
struct UnknownFunction {
  UnknownName name = UnknownName::xi;
  std::uint8_t args = 0;                   // bit i set <=> kPointVariables[i] is an argument
  std::array<std::uint8_t, 5> derivs{};    // derivative counts per point variable

  [[nodiscard]] bool depends_on(std::size_t var) const { return (args >> var) & 1U; }
  [[nodiscard]] std::size_t order() const;
  friend bool operator==(const UnknownFunction&, const UnknownFunction&) = default;
};

enum class Kind : std::uint8_t { number, symbol, unknown, add, mul, pow, func };

class Expr;

struct Node {
  Kind kind = Kind::number;
  Rational value;                // number
  Symbol symbol = Symbol::s;     // symbol
  UnknownFunction unknown;       // unknown
  Function fn = Function::exp;   // func
  Rational exponent;             // pow
  std::vector<Expr> operands;    // add/mul: terms/factors; pow: {base}; func: {arg}
  std::size_t hash = 0;
};

// Immutable symbolic expression. Copies share the underlying tree.
class Expr {
 public:
  Expr();  // the number 0
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(Rational value);  // NOLINT(google-explicit-constructor)
  Expr(Symbol s);  // NOLINT(google-explicit-constructor)

  static Expr number(Rational value);
  static Expr symbol(Symbol s);
  static Expr unknown(UnknownFunction f);
  // Raw constructors: flatten nested sums/products and fold numeric operands,
  // but perform no further rewriting.
  static Expr add(std::vector<Expr> terms);
  static Expr mul(std::vector<Expr> factors);
  static Expr pow(Expr base, Rational exponent);
  static Expr func(Function f, Expr arg);

  [[nodiscard]] const Node& node() const { return *node_; }
  [[nodiscard]] Kind kind() const { return node_->kind; }
  [[nodiscard]] std::size_t hash() const { return node_->hash; }
  [[nodiscard]] const std::vector<Expr>& operands() const { return node_->operands; }

  [[nodiscard]] bool is_number() const { return kind() == Kind::number; }
  [[nodiscard]] bool is_number(long v) const;
  [[nodiscard]] bool is_zero_node() const { return is_number(0); }
  [[nodiscard]] const Rational& value() const { return node_->value; }

  [[nodiscard]] bool depends_on(Symbol s) const;
  [[nodiscard]] bool contains_unknowns() const;

  friend bool operator==(const Expr& lhs, const Expr& rhs);
  friend bool operator!=(const Expr& lhs, const Expr& rhs) { return !(lhs == rhs); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Node node);
  std::shared_ptr<const Node> node_;
};

// Total structural order used for canonical operand sorting.
[[nodiscard]] int compare(const Expr& lhs, const Expr& rhs);
struct ExprLess {
  bool operator()(const Expr& lhs, const Expr& rhs) const { return compare(lhs, rhs) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

Expr operator+(const Expr& lhs, const Expr& rhs);
Expr operator-(const Expr& lhs, const Expr& rhs);
Expr operator-(const Expr& e);
Expr operator*(const Expr& lhs, const Expr& rhs);
// Throws std::domain_error when the denominator is the literal number 0.
Expr operator/(const Expr& lhs, const Expr& rhs);

Expr pow(const Expr& base, long exponent);
Expr pow(const Expr& base, const Rational& exponent);
Expr exp(const Expr& e);
Expr ln(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr sec(const Expr& e);
Expr cot(const Expr& e);
Expr sqrt(const Expr& e);

// Unknown function `name` depending on every point variable in `args`.
Expr unknown(UnknownName name, std::initializer_list<Symbol> args);

// DSL text (re-parseable) and LaTeX renderings.
[[nodiscard]] std::string to_string(const Expr& e);
[[nodiscard]] std::string to_latex(const Expr& e);
[[nodiscard]] std::string unknown_to_string(const UnknownFunction& f);

std::ostream& operator<<(std::ostream& os, const Expr& e);

// Replace symbols by expressions (simultaneously).
[[nodiscard]] Expr substitute(const Expr& e, const std::vector<std::pair<Symbol, Expr>>& bindings);

// Collect the free symbols and unknown functions of e.
[[nodiscard]] std::vector<Symbol> free_symbols(const Expr& e);
[[nodiscard]] std::vector<UnknownFunction> unknown_functions(const Expr& e);

}  // namespace noether::sym
