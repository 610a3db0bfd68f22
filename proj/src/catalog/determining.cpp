#include "noether/catalog/determining.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include "noether/catalog/catalog.hpp"
#include "noether/symbolic/parser.hpp"

namespace noether::catalog {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

}  // namespace

std::string expand_shorthand(const std::string& text) {
  static const std::regex derivative(R"(\b(xi|eta[0-3]|A)_(s|t|r|theta|phi)\b)");
  static const std::regex bare(R"(\b(xi|eta[0-3])\b(?![(@]))");
  std::string out = std::regex_replace(text, derivative, "diff($1@, $2)");
  out = std::regex_replace(out, bare, "$1(s,t,r,theta,phi)");
  return std::regex_replace(out, std::regex("@"), "(s,t,r,theta,phi)");
}

std::vector<PrintedEquation> load_printed_system(const std::filesystem::path& root, spacetime::LambdaBranch branch) {
  const auto path = root / "determining" / (std::string(spacetime::branch_name(branch)) + ".txt");
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open " + path.string());
  std::map<int, PrintedEquation> eqs;
  std::size_t line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    std::istringstream key(line.substr(0, eq == std::string::npos ? 0 : eq));
    std::string kind;
    int index = 0;
    if (eq == std::string::npos || !(key >> kind >> index)) {
      throw CatalogError(path.string() + ":" + std::to_string(line_no) + ": expected '<kind> <n> = ...'");
    }
    const std::string value = trim(line.substr(eq + 1));
    PrintedEquation& p = eqs[index];
    p.index = index;
    if (kind == "equation") {
      p.text = expand_shorthand(value);
    } else if (kind == "note") {
      p.note = value;
    } else if (kind == "erratum") {
      const auto semi = value.find(';');
      p.erratum = expand_shorthand(trim(value.substr(0, semi)));
      if (semi != std::string::npos) p.reason = trim(value.substr(semi + 1));
    } else {
      throw CatalogError(path.string() + ":" + std::to_string(line_no) + ": unknown kind '" + kind + "'");
    }
  }
  std::vector<PrintedEquation> out;
  for (auto& [i, p] : eqs) {
    if (p.text.empty()) throw CatalogError(path.string() + ": equation " + std::to_string(i) + " missing");
    out.push_back(std::move(p));
  }
  return out;
}

SystemComparison compare_printed_system(const symmetry::DeterminingSystem& ds,
                                        const std::vector<PrintedEquation>& printed, std::uint64_t seed) {
  SystemComparison out;
  out.generated = static_cast<int>(ds.nonredundant.size());
  std::vector<bool> used(ds.nonredundant.size(), false);
  const auto domain = ds.family.sample_domain();
  auto find = [&](const Expr& target, EquationMatch& m) {
    for (std::size_t k = 0; k < ds.nonredundant.size(); ++k) {
      const auto& g = ds.nonredundant[k];
      auto c = sym::proportionality_constant(g.normalized, target, domain, seed);
      if (!c) c = sym::proportionality_constant(g.coefficient, target, domain, seed);
      if (c) {
        used[k] = true;
        m.monomial = g.monomial.label();
        m.factor = c->get_str();
        return true;
      }
    }
    return false;
  };
  for (const auto& p : printed) {
    EquationMatch m;
    m.index = p.index;
    m.note = p.note;
    m.direct = find(sym::parse(p.text), m);
    if (!m.direct && !p.erratum.empty()) {
      m.corrected = find(sym::parse(p.erratum), m);
      if (m.corrected) m.reason = p.reason;
    }
    out.matches.push_back(std::move(m));
  }
  for (std::size_t k = 0; k < used.size(); ++k) {
    if (!used[k]) out.unmatched_generated.push_back(ds.nonredundant[k].monomial.label());
  }
  return out;
}

std::vector<std::string> SystemComparison::discrepancies() const {
  std::vector<std::string> out;
  for (const auto& m : matches) {
    const std::string tag = "equation " + std::to_string(m.index);
    if (!m.note.empty()) out.push_back(tag + ": " + m.note);
    if (m.corrected) out.push_back(tag + ": " + m.reason + " (corrected form matches [" + m.monomial + "])");
    if (!m.matched()) out.push_back(tag + ": no generated equation matches");
  }
  for (const auto& u : unmatched_generated) out.push_back("generated [" + u + "] has no printed counterpart");
  return out;
}

bool SystemComparison::all_matched() const {
  return unmatched_generated.empty() &&
         std::all_of(matches.begin(), matches.end(), [](const EquationMatch& m) { return m.matched(); });
}

}  // namespace noether::catalog
