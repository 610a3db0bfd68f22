#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "noether/symbolic/expression.hpp"

namespace noether::sym {

// Syntax error in DSL text. `offset` is the 0-based character offset of the
// offending token; line/column are 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset, std::size_t line, std::size_t column);

  [[nodiscard]] std::size_t offset() const { return offset_; }
  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

 private:
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

// Identifier that is neither a symbol, a function nor an unknown function.
class UnknownIdentifierError : public ParseError {
 public:
  UnknownIdentifierError(const std::string& identifier, std::size_t offset, std::size_t line,
                         std::size_t column);
  [[nodiscard]] const std::string& identifier() const { return identifier_; }

 private:
  std::string identifier_;
};

// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | factor
//   factor := base ('^' exponent)?
//   exponent := ['-'] integer | '(' ['-'] integer ['/' integer] ')'
//   base   := number | ident | func '(' expr ')' | unknown '(' ident-list ')'
//           | 'diff' '(' expr (',' ident)+ ')' | '(' expr ')'
// Identifiers: s t r theta phi td rd thetad phid alpha beta a b p.
// Functions: exp ln sin cos tan sec cot sqrt.
// Unknown functions: xi eta0 eta1 eta2 eta3 A nu mu, applied to point variables.
[[nodiscard]] Expr parse(std::string_view text);

}  // namespace noether::sym
