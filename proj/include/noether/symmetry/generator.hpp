#pragma once

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "noether/symbolic/expression.hpp"

namespace noether::symmetry {

using sym::Expr;
using sym::Symbol;

// X = xi d_s + eta^0 d_t + eta^1 d_r + eta^2 d_theta + eta^3 d_phi, with gauge A.
struct Generator {
  std::string name;
  Expr xi;
  std::array<Expr, 4> eta;
  Expr gauge;

  // (xi, eta^0..eta^3) in point-variable order (s, t, r, theta, phi).
  [[nodiscard]] std::array<Expr, 5> components() const { return {xi, eta[0], eta[1], eta[2], eta[3]}; }
  // X applied to a function of (s, t, r, theta, phi).
  [[nodiscard]] Expr apply(const Expr& f) const;
};

[[nodiscard]] Generator make_generator(std::string name, Expr xi, std::array<Expr, 4> eta,
                                       Expr gauge = Expr(0L));
// Generator with every field an unknown function of (s, t, r, theta, phi).
[[nodiscard]] Generator unknown_generator();

class GeneratorParseError : public std::runtime_error {
 public:
  GeneratorParseError(const std::string& message, std::size_t line);
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// `key = value` lines with keys name, xi, eta0..eta3, gauge; missing fields
// are 0. Fields must be free of velocities.
[[nodiscard]] Generator parse_generator(std::string_view text, const std::string& fallback_name = "");
[[nodiscard]] Generator load_generator(const std::filesystem::path& path);
[[nodiscard]] std::string format_generator(const Generator& g);
// "xi d_s + ... ; A = ..." on one line.
[[nodiscard]] std::string describe(const Generator& g);

}  // namespace noether::symmetry
