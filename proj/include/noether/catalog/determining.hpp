#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "noether/symmetry/noether.hpp"

namespace noether::catalog {

// One equation of the printed determining system, with an optional
// corrected form and a transcription note.
struct PrintedEquation {
  int index = 0;
  std::string text;  // DSL, shorthand expanded
  std::string note;
  std::string erratum;
  std::string reason;
};

// <root>/determining/<branch>.txt. Shorthand u_x (u in xi, eta0..eta3, A;
// x a coordinate or s) expands to diff(u(s,t,r,theta,phi), x).
[[nodiscard]] std::vector<PrintedEquation> load_printed_system(const std::filesystem::path& root,
                                                               spacetime::LambdaBranch branch);
[[nodiscard]] std::string expand_shorthand(const std::string& text);

struct EquationMatch {
  int index = 0;
  bool direct = false;      // printed form equals a generated equation times a constant
  bool corrected = false;   // only the erratum matched
  std::string monomial;     // label of the generated equation
  std::string factor;       // generated = factor * printed
  std::string note;
  std::string reason;
  [[nodiscard]] bool matched() const { return direct || corrected; }
};

struct SystemComparison {
  int generated = 0;  // nonredundant generated equations
  std::vector<EquationMatch> matches;
  std::vector<std::string> unmatched_generated;  // monomials no printed equation maps to
  // Printed typos, transcription notes and corrections, one line each.
  [[nodiscard]] std::vector<std::string> discrepancies() const;
  [[nodiscard]] bool all_matched() const;
};

[[nodiscard]] SystemComparison compare_printed_system(const symmetry::DeterminingSystem& ds,
                                                      const std::vector<PrintedEquation>& printed,
                                                      std::uint64_t seed = 42);

}  // namespace noether::catalog
