#include "noether/symmetry/generator.hpp"

#include <fstream>
#include <sstream>

#include "noether/symbolic/calculus.hpp"
#include "noether/symbolic/parser.hpp"
#include "noether/symbolic/simplify.hpp"

namespace noether::symmetry {

Expr Generator::apply(const Expr& f) const {
  const auto c = components();
  Expr sum = Expr(0L);
  for (std::size_t i = 0; i < 5; ++i) {
    if (c[i].is_zero_node()) continue;
    sum = sum + c[i] * sym::differentiate(f, sym::kPointVariables[i]);
  }
  return sum;
}

Generator make_generator(std::string name, Expr xi, std::array<Expr, 4> eta, Expr gauge) {
  return Generator{std::move(name), std::move(xi), std::move(eta), std::move(gauge)};
}

Generator unknown_generator() {
  using sym::UnknownName;
  auto f = [](UnknownName n) {
    return sym::unknown(n, {Symbol::s, Symbol::t, Symbol::r, Symbol::theta, Symbol::phi});
  };
  return make_generator("generic", f(UnknownName::xi),
                        {f(UnknownName::eta0), f(UnknownName::eta1), f(UnknownName::eta2), f(UnknownName::eta3)},
                        f(UnknownName::gauge));
}

GeneratorParseError::GeneratorParseError(const std::string& message, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

Generator parse_generator(std::string_view text, const std::string& fallback_name) {
  Generator g = make_generator(fallback_name, Expr(0L), {Expr(0L), Expr(0L), Expr(0L), Expr(0L)});
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw GeneratorParseError("expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) throw GeneratorParseError("missing value for '" + key + "'", line_no);
    if (key == "name") {
      g.name = value;
      continue;
    }
    Expr* slot = nullptr;
    if (key == "xi") slot = &g.xi;
    if (key == "gauge") slot = &g.gauge;
    for (int i = 0; i < 4; ++i) {
      if (key == "eta" + std::to_string(i)) slot = &g.eta[i];
    }
    if (!slot) throw GeneratorParseError("unknown key '" + key + "'", line_no);
    try {
      *slot = sym::parse(value);
    } catch (const sym::ParseError& e) {
      throw GeneratorParseError(e.what(), line_no);
    }
    for (Symbol v : sym::kVelocities) {
      if (slot->depends_on(v)) {
        throw GeneratorParseError(key + " depends on a velocity; generators are point symmetries", line_no);
      }
    }
  }
  return g;
}

Generator load_generator(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open generator file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_generator(buffer.str(), path.stem().string());
  } catch (const GeneratorParseError& e) {
    throw GeneratorParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string format_generator(const Generator& g) {
  std::ostringstream os;
  os << "name = " << g.name << "\n";
  if (!g.xi.is_zero_node()) os << "xi = " << sym::to_string(g.xi) << "\n";
  for (int i = 0; i < 4; ++i) {
    if (!g.eta[i].is_zero_node()) os << "eta" << i << " = " << sym::to_string(g.eta[i]) << "\n";
  }
  if (!g.gauge.is_zero_node()) os << "gauge = " << sym::to_string(g.gauge) << "\n";
  return os.str();
}

std::string describe(const Generator& g) {
  static const char* kParts[] = {"d_s", "d_t", "d_r", "d_theta", "d_phi"};
  std::string out;
  const auto c = g.components();
  for (std::size_t i = 0; i < 5; ++i) {
    if (c[i].is_zero_node()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + sym::to_string(c[i]) + ") " + kParts[i];
  }
  if (out.empty()) out = "0";
  if (!g.gauge.is_zero_node()) out += "; A = " + sym::to_string(g.gauge);
  return out;
}

}  // namespace noether::symmetry
