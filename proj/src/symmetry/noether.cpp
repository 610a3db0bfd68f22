#include "noether/symmetry/noether.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "noether/spacetime/geometry.hpp"
#include "noether/symbolic/calculus.hpp"

namespace noether::symmetry {

using sym::UnknownFunction;
using sym::UnknownName;

Expr total_derivative(const Expr& e) {
  Expr sum = sym::differentiate(e, Symbol::s);
  for (std::size_t i = 0; i < 4; ++i) {
    sum = sum + Expr(sym::kVelocities[i]) * sym::differentiate(e, sym::kCoordinates[i]);
  }
  return sym::simplify(sum);
}

std::array<Expr, 4> prolong(const Generator& g) {
  const Expr dxi = total_derivative(g.xi);
  std::array<Expr, 4> out;
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = sym::simplify(total_derivative(g.eta[i]) - Expr(sym::kVelocities[i]) * dxi);
  }
  return out;
}

namespace {

Expr raw_residual(const Metric& m, const Generator& g) {
  const Expr L = spacetime::lagrangian(m);
  const auto eta_s = prolong(g);
  Expr sum = g.xi * sym::differentiate(L, Symbol::s);
  for (std::size_t i = 0; i < 4; ++i) {
    sum = sum + g.eta[i] * sym::differentiate(L, sym::kCoordinates[i]);
    sum = sum + eta_s[i] * sym::differentiate(L, sym::kVelocities[i]);
  }
  return sum + total_derivative(g.xi) * L - total_derivative(g.gauge);
}

bool is_symmetry_unknown(const UnknownFunction& f) {
  return f.name != UnknownName::nu && f.name != UnknownName::mu;
}

// Order used to pick the leading unknown of a linear equation.
bool unknown_before(const UnknownFunction& a, const UnknownFunction& b) {
  if (a.name != b.name) return a.name < b.name;
  if (a.order() != b.order()) return a.order() > b.order();
  return a.derivs > b.derivs;
}

}  // namespace

Expr noether_residual(const Metric& m, const Generator& g) { return sym::simplify(raw_residual(m, g)); }

std::string VerificationReport::status() const {
  switch (decision.status) {
    case sym::ZeroStatus::zero:
      return "symbolic-zero";
    case sym::ZeroStatus::nonzero:
      return "nonzero";
    case sym::ZeroStatus::undecided:
      return decision.numerically_zero() ? "numeric-zero" : "undecided";
  }
  return "undecided";
}

VerificationReport verify_symmetry(const Metric& m, const Generator& g, std::uint64_t seed) {
  VerificationReport out;
  out.generator = g.name;
  try {
    out.residual = noether_residual(m, g);
    out.decision = sym::is_zero(out.residual, m.sample_domain(), seed);
  } catch (const std::domain_error&) {
    // The rewriter could not normalize; fall back to sampling the raw form.
    out.residual = raw_residual(m, g);
    out.decision = sym::is_zero(out.residual, m.sample_domain(), seed);
  }
  return out;
}

KillingReport killing_check(const Metric& m, const Generator& g, std::uint64_t seed) {
  if (!sym::simplify(g.xi).is_zero_node()) {
    throw std::invalid_argument("killing_check: generator '" + g.name + "' has xi != 0");
  }
  const Expr gauge = sym::simplify(g.gauge);
  if (!gauge.is_number()) {
    throw std::invalid_argument("killing_check: generator '" + g.name + "' has a non-constant gauge");
  }
  for (const auto& e : g.eta) {
    if (e.depends_on(Symbol::s)) {
      throw std::invalid_argument("killing_check: generator '" + g.name + "' depends on s");
    }
  }
  static const char* kNames[] = {"t", "r", "theta", "phi"};
  KillingReport out;
  for (const auto& [ab, eq] : spacetime::killing_equations(m, g.eta)) {
    auto decision = sym::is_zero(eq, m.sample_domain(), seed);
    if (!decision.accepted_zero() && out.killing) {
      out.killing = false;
      out.witness = decision.witness;
      out.failing = std::string("(") + kNames[ab.first] + "," + kNames[ab.second] + ")";
    }
    out.equations.emplace_back(ab, std::move(decision));
  }
  return out;
}

DeterminingSystem determining_system(const Metric& family) {
  DeterminingSystem ds;
  ds.family = family;
  ds.equations = sym::collect_velocity_monomials(noether_residual(family, unknown_generator()));
  for (const auto& [mono, coefficient] : ds.equations) {
    std::vector<UnknownFunction> unknowns;
    for (const auto& f : sym::unknown_functions(coefficient)) {
      if (is_symmetry_unknown(f)) unknowns.push_back(f);
    }
    Expr normalized = coefficient;
    if (!unknowns.empty()) {
      const UnknownFunction lead = *std::min_element(unknowns.begin(), unknowns.end(), unknown_before);
      const Expr factor = sym::simplify(sym::replace_unknowns(
          coefficient, [&lead](const UnknownFunction& f) -> std::optional<Expr> {
            if (!is_symmetry_unknown(f)) return std::nullopt;
            return Expr(f == lead ? 1L : 0L);
          }));
      if (!factor.is_zero_node()) normalized = sym::simplify(coefficient / factor);
    }
    auto same = std::find_if(ds.nonredundant.begin(), ds.nonredundant.end(),
                             [&normalized](const DeterminingEquation& e) { return e.normalized == normalized; });
    if (same != ds.nonredundant.end()) {
      same->duplicates.push_back(mono);
    } else {
      ds.nonredundant.push_back(DeterminingEquation{mono, coefficient, normalized, {}});
    }
  }
  return ds;
}

DeterminingSystem determining_system(spacetime::LambdaBranch branch) {
  return determining_system(spacetime::symbolic_family(branch));
}

std::string DeterminingSystem::to_text() const {
  std::ostringstream os;
  os << "# determining system, lambda = " << spacetime::branch_name(family.lambda) << ", "
     << nonredundant.size() << " equations\n";
  for (const auto& e : nonredundant) {
    os << "[" << e.monomial.label() << "] " << sym::to_string(e.normalized) << " = 0";
    if (!e.duplicates.empty()) {
      os << "   (also";
      for (const auto& d : e.duplicates) os << " " << d.label();
      os << ")";
    }
    os << "\n";
  }
  return os.str();
}

std::string DeterminingSystem::to_latex() const {
  std::ostringstream os;
  os << "% determining system, lambda = " << spacetime::branch_name(family.lambda) << ", "
     << nonredundant.size() << " equations\n";
  os << "\\begin{align*}\n";
  for (std::size_t i = 0; i < nonredundant.size(); ++i) {
    const auto& e = nonredundant[i];
    os << "  &[" << e.monomial.latex() << "] && " << sym::to_latex(e.normalized) << " = 0";
    os << (i + 1 < nonredundant.size() ? " \\\\\n" : "\n");
  }
  os << "\\end{align*}\n";
  return os.str();
}

std::map<sym::VelocityMonomial, sym::ZeroDecision> substitute_into_system(const DeterminingSystem& ds,
                                                                          const Generator& g,
                                                                          const std::optional<Metric>& m,
                                                                          std::uint64_t seed) {
  if (m && m->lambda != ds.family.lambda) {
    throw std::invalid_argument("substitute_into_system: lambda branch of the metric differs from the system");
  }
  const std::pair<UnknownName, Expr> fields[] = {
      {UnknownName::xi, g.xi},         {UnknownName::eta0, g.eta[0]}, {UnknownName::eta1, g.eta[1]},
      {UnknownName::eta2, g.eta[2]},   {UnknownName::eta3, g.eta[3]}, {UnknownName::gauge, g.gauge}};
  const auto domain = m ? m->sample_domain() : sym::SampleDomain::standard();
  std::map<sym::VelocityMonomial, sym::ZeroDecision> out;
  for (const auto& [mono, coefficient] : ds.equations) {
    Expr e = coefficient;
    for (const auto& [name, value] : fields) e = sym::substitute_unknown(e, name, value);
    if (m) {
      e = sym::substitute_unknown(e, UnknownName::nu, m->nu);
      e = sym::substitute_unknown(e, UnknownName::mu, m->mu);
    }
    out.emplace(mono, sym::is_zero(e, domain, seed));
  }
  return out;
}

FirstIntegral first_integral(const Metric& m, const Generator& g, std::uint64_t seed) {
  const Expr L = spacetime::lagrangian(m);
  Expr bracket = g.xi * L;
  for (std::size_t i = 0; i < 4; ++i) {
    const Expr u(sym::kVelocities[i]);
    bracket = bracket + (g.eta[i] - g.xi * u) * sym::differentiate(L, sym::kVelocities[i]);
  }
  FirstIntegral out;
  out.expr = sym::simplify(g.gauge - bracket);
  out.source = g.name;
  const auto report = verify_symmetry(m, g, seed);
  if (!report.verified()) {
    out.note = "warning: generator " + g.name + " is not a verified Noether symmetry (" + report.status() + ")";
  }
  return out;
}

}  // namespace noether::symmetry
