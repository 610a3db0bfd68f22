#include "noether/symbolic/parser.hpp"

#include <cctype>

#include "noether/symbolic/calculus.hpp"

namespace noether::sym {

ParseError::ParseError(const std::string& message, std::size_t offset, std::size_t line,
                       std::size_t column)
    : std::runtime_error(message + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column) + " (offset " + std::to_string(offset) + ")"),
      offset_(offset),
      line_(line),
      column_(column) {}

namespace {

std::string allowed_identifiers() {
  std::string out;
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    if (i) out += ", ";
    out += symbol_name(static_cast<Symbol>(i));
  }
  return out;
}

}  // namespace

UnknownIdentifierError::UnknownIdentifierError(const std::string& identifier, std::size_t offset,
                                               std::size_t line, std::size_t column)
    : ParseError("unknown identifier '" + identifier + "' (allowed symbols: " +
                     allowed_identifiers() +
                     "; functions: exp, ln, sin, cos, tan, sec, cot, sqrt, diff)",
                 offset, line, column),
      identifier_(identifier) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }

  [[noreturn]] void fail_at(const std::string& message, std::size_t at) const {
    auto [line, column] = location(at);
    throw ParseError(message, at, line, column);
  }

  std::pair<std::size_t, std::size_t> location(std::size_t at) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    return {line, column};
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    std::vector<Expr> terms;
    skip_space();
    if (accept('+')) {
      terms.push_back(term());
    } else {
      terms.push_back(term());
    }
    while (true) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return Expr::add(std::move(terms));
  }

  Expr term() {
    Expr lhs = unary();
    while (true) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else {
        skip_space();
        const std::size_t at = pos_;
        if (!accept('/')) break;
        Expr rhs = unary();
        if (rhs.is_zero_node()) fail_at("division by zero", at);
        lhs = lhs / rhs;
      }
    }
    return lhs;
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return factor();
  }

  Expr factor() {
    Expr base = primary();
    if (accept('^')) {
      Rational exponent = exponent_literal();
      if (base.is_zero_node() && exponent < 0) fail("division by zero");
      return Expr::pow(base, exponent);
    }
    return base;
  }

  Rational exponent_literal() {
    if (accept('(')) {
      const bool negative = accept('-');
      mpz_class num = integer();
      mpz_class den = 1;
      if (accept('/')) den = integer();
      if (den == 0) fail("zero denominator in exponent");
      expect(')');
      Rational q(num, den);
      q.canonicalize();
      return negative ? Rational(-q) : q;
    }
    const bool negative = accept('-');
    Rational q(integer());
    return negative ? Rational(-q) : q;
  }

  mpz_class integer() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) {
      if (pos_ >= text_.size()) fail("expected an integer but reached end of input");
      fail("expected an integer");
    }
    return mpz_class(std::string(text_.substr(start, pos_ - start)), 10);
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string digits(text_.substr(start, pos_ - start));
    mpz_class den = 1;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      const std::size_t frac_start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string frac(text_.substr(frac_start, pos_ - frac_start));
      digits += frac;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    }
    if (digits.empty()) fail_at("malformed number", start);
    Rational q(mpz_class(digits, 10), den);
    q.canonicalize();
    return Expr(q);
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                   text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  Symbol point_variable() {
    skip_space();
    const std::size_t at = pos_;
    const std::string name = identifier();
    auto sym = symbol_from_name(name);
    if (!sym) {
      auto [line, column] = location(at);
      if (name.empty()) fail_at("expected a variable name", at);
      throw UnknownIdentifierError(name, at, line, column);
    }
    return *sym;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) {
      fail("unexpected '" + std::string(1, c) + "'");
    }
    const std::size_t at = pos_;
    const std::string name = identifier();
    if (auto fn = function_from_name(name)) {
      expect('(');
      Expr arg = expr();
      expect(')');
      return Expr::func(*fn, arg);
    }
    if (name == "diff") {
      expect('(');
      Expr e = expr();
      bool any = false;
      while (accept(',')) {
        e = differentiate(e, point_variable());
        any = true;
      }
      if (!any) fail("diff needs at least one variable");
      expect(')');
      return e;
    }
    if (auto uf = unknown_from_name(name)) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '(') {
        ++pos_;
        UnknownFunction f;
        f.name = *uf;
        do {
          const std::size_t var_at = pos_;
          Symbol s = point_variable();
          auto idx = point_variable_index(s);
          if (!idx) fail_at("unknown functions take point variables (s, t, r, theta, phi)", var_at);
          f.args |= static_cast<std::uint8_t>(1U << *idx);
        } while (accept(','));
        expect(')');
        return Expr::unknown(f);
      }
    }
    if (auto sym = symbol_from_name(name)) return Expr(*sym);
    auto [line, column] = location(at);
    throw UnknownIdentifierError(name, at, line, column);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace noether::sym
