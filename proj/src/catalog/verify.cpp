#include "noether/catalog/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <regex>
#include <set>

#include <Eigen/Dense>

#include "noether/numeric/geodesic.hpp"
#include "noether/spacetime/geometry.hpp"
#include "noether/symbolic/calculus.hpp"
#include "noether/symbolic/evaluate.hpp"
#include "noether/symbolic/parser.hpp"
#include "noether/symmetry/algebra.hpp"

namespace noether::catalog {

using sym::Expr;
using sym::Symbol;

namespace {

bool is_minimal(const std::string& name) {
  return name == "X0" || name == "X1" || name == "X2" || name == "X3" || name == "Y0";
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Generator with_gauge(Generator g, const Expr& gauge) {
  g.gauge = gauge;
  return g;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

GeneratorCheck check_generator(const Metric& m, const Generator& g, std::uint64_t seed) {
  GeneratorCheck out;
  out.name = g.name;
  out.effective = g;
  auto report = symmetry::verify_symmetry(m, g, seed);
  if (!report.verified() && !g.gauge.is_zero_node()) {
    // Is the failure only a wrong factor on the gauge?
    const Expr r0 = symmetry::noether_residual(m, with_gauge(g, Expr(0L)));
    const Expr da = symmetry::total_derivative(g.gauge);
    if (!da.is_zero_node()) {
      if (auto c = sym::proportionality_constant(r0, da, m.sample_domain(), seed); c && *c != 1) {
        Generator fixed = with_gauge(g, sym::simplify(Expr(*c) * g.gauge));
        auto again = symmetry::verify_symmetry(m, fixed, seed);
        if (again.verified()) {
          out.gauge_correction = "printed A = " + sym::to_string(g.gauge) + ", verified A = " +
                                 sym::to_string(fixed.gauge);
          out.effective = fixed;
          report = again;
        }
      }
    }
  }
  out.status = report.status();
  out.verified = report.verified();
  out.witness = report.decision.witness;
  out.witness_value = report.decision.witness_value;
  try {
    out.killing = symmetry::killing_check(m, out.effective, seed).killing ? "killing" : "not-killing";
  } catch (const std::invalid_argument&) {
    out.killing = "n/a";
  }
  return out;
}

std::string outcome_name(IntegralOutcome o) {
  switch (o) {
    case IntegralOutcome::matched:
      return "matched";
    case IntegralOutcome::matched_erratum:
      return "matched-erratum";
    case IntegralOutcome::no_table_entry:
      return "no-table-entry";
    case IntegralOutcome::mismatch:
      return "mismatch";
  }
  return "mismatch";
}

LinearFit fit_integral(const Expr& engine, const Expr& table, const sym::SampleDomain& domain, std::uint64_t seed,
                       int points) {
  sym::Rng rng(seed);
  std::vector<double> x, y;
  for (int draw = 0; draw < 50 * points && static_cast<int>(x.size()) < points; ++draw) {
    const sym::Point p = domain.draw(rng);
    try {
      const double yi = sym::eval_numeric(engine, p);
      const double xi = sym::eval_numeric(table, p);
      if (!std::isfinite(xi) || !std::isfinite(yi)) continue;
      x.push_back(xi);
      y.push_back(yi);
    } catch (const sym::EvalError&) {
    }
  }
  LinearFit fit;
  if (static_cast<int>(x.size()) < points) return fit;
  // Least squares y = k x + c.
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, scale = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    scale = std::max(scale, std::fabs(y[i]));
  }
  if (sxx < 1e-20) return fit;  // constant table expression
  fit.factor = sxy / sxx;
  fit.offset = my - fit.factor * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.residual = std::max(fit.residual, std::fabs(y[i] - fit.factor * x[i] - fit.offset) / scale);
  }
  fit.ok = fit.residual <= 1e-9 && std::fabs(fit.factor) > 1e-12;
  return fit;
}

namespace {

// Parse a table expression for metric m: L is the Lagrangian, nu(r), mu(r)
// are the metric profiles.
Expr table_expression(const std::string& text, const Metric& m) {
  static const std::regex kL(R"(\bL\b)");
  const std::string lagrangian = "(" + sym::to_string(spacetime::lagrangian(m)) + ")";
  Expr e = sym::parse(std::regex_replace(text, kL, lagrangian));
  e = sym::substitute_unknown(e, sym::UnknownName::nu, m.nu);
  e = sym::substitute_unknown(e, sym::UnknownName::mu, m.mu);
  return e;
}

IntegralCheck check_integral(const CatalogEntry& e, const Metric& mc, const Generator& g, std::uint64_t seed) {
  IntegralCheck out;
  out.generator = g.name;
  const Expr engine = symmetry::first_integral(mc, g, seed).expr;
  out.engine = sym::to_string(engine);
  const auto domain = mc.sample_domain();
  auto attempt = [&](const std::string& text) {
    const LinearFit fit = fit_integral(engine, table_expression(text, mc), domain, seed);
    if (fit.ok) {
      out.table = text;
      out.factor = fit.factor;
      out.offset = fit.offset;
      out.factor_rational = sym::rationalize(fit.factor, 10000).get_str();
    }
    return fit;
  };
  std::vector<std::string> own, pool;
  for (const auto& i : e.integrals) {
    if (i.generator == g.name) own.push_back(i.text);
    if (i.generator == "*") pool.push_back(i.text);
  }
  const auto& candidates = own.empty() ? pool : own;
  for (const auto& text : candidates) {
    if (attempt(text).ok) {
      out.outcome = IntegralOutcome::matched;
      return out;
    }
  }
  for (const auto& err : e.errata) {
    if (err.generator == g.name && attempt(err.text).ok) {
      out.outcome = IntegralOutcome::matched_erratum;
      out.reason = err.reason;
      return out;
    }
  }
  if (candidates.empty()) {
    out.outcome = IntegralOutcome::no_table_entry;
    return out;
  }
  out.outcome = IntegralOutcome::mismatch;
  out.table = candidates.front();
  out.reason = own.empty() ? "no table row is an affine image of the engine integral"
                           : "table expression is not an affine image of the engine integral";
  return out;
}

std::string combination(const std::vector<sym::Rational>& c, const std::vector<std::string>& names) {
  std::string rhs;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    if (!rhs.empty()) rhs += c[k] > 0 ? " + " : " - ";
    else if (c[k] < 0) rhs += "-";
    const sym::Rational mag = abs(c[k]);
    if (mag != 1) rhs += mag.get_str() + " ";
    rhs += names[k];
  }
  return rhs.empty() ? "0" : rhs;
}

void check_commutators(const CatalogEntry& e, const std::vector<Generator>& basis, EntryReport& report,
                       std::uint64_t seed) {
  symmetry::CommutatorTable table;
  try {
    table = symmetry::commutator_table(basis, e.metric.sample_domain(), seed);
  } catch (const std::exception& ex) {
    report.closed = false;
    report.closure_error = ex.what();
    for (const auto& c : e.commutators) report.commutators.push_back({"[" + c.left + ", " + c.right + "]", "", false, false, ""});
    return;
  }
  report.closed = true;
  report.jacobi_residual = table.jacobi_residual;
  auto index = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < table.names.size(); ++i) {
      if (table.names[i] == name) return i;
    }
    throw CatalogError(e.label() + ": commutator names unknown generator " + name);
  };
  const sym::Point params = e.metric.parameter_point();
  auto expected_of = [&](const ExpectedCommutator& c, std::string* printed) {
    std::vector<double> expected(table.names.size(), 0.0);
    for (const auto& [name, coefficient] : c.terms) {
      expected[index(name)] += sym::eval_numeric(sym::parse(coefficient), params);
      if (printed) {
        if (!printed->empty()) *printed += " + ";
        *printed += "(" + coefficient + ") " + name;
      }
    }
    if (printed && printed->empty()) *printed = "0";
    return expected;
  };
  auto matches = [&](const ExpectedCommutator& c, std::size_t i, std::size_t j) {
    const auto expected = expected_of(c, nullptr);
    const auto& got = table.constants[i][j];
    for (std::size_t k = 0; k < got.size(); ++k) {
      if (std::fabs(got[k].get_d() - expected[k]) >= 1e-9) return false;
    }
    return true;
  };
  // Corrected relation for the pair (i, j), if catalogued and confirmed.
  auto erratum_for = [&](std::size_t i, std::size_t j) -> std::string {
    for (const auto& c : e.commutator_errata) {
      const std::size_t a = index(c.left), b = index(c.right);
      if (std::minmax(a, b) != std::minmax(i, j)) continue;
      // [b, a] = -[a, b]: compare in the catalogued order.
      if (!matches(c, a, b)) continue;
      std::string rhs;
      expected_of(c, &rhs);
      return "[" + c.left + ", " + c.right + "] = " + rhs + (c.reason.empty() ? "" : " (" + c.reason + ")");
    }
    return "";
  };
  std::set<std::pair<std::size_t, std::size_t>> listed;
  for (const auto& c : e.commutators) {
    const std::size_t i = index(c.left), j = index(c.right);
    listed.insert({std::min(i, j), std::max(i, j)});
    std::string printed;
    expected_of(c, &printed);
    CommutatorCheck check{"[" + c.left + ", " + c.right + "] = " + printed,
                          combination(table.constants[i][j], table.names), matches(c, i, j), false, ""};
    if (!check.pass) {
      check.erratum = erratum_for(i, j);
      check.explained = !check.erratum.empty();
    }
    report.commutators.push_back(std::move(check));
  }
  if (e.commutators_complete) {
    std::string offenders, errata;
    bool all_explained = true;
    for (std::size_t i = 0; i < table.names.size(); ++i) {
      for (std::size_t j = i + 1; j < table.names.size(); ++j) {
        if (listed.count({i, j})) continue;
        const auto& got = table.constants[i][j];
        if (std::any_of(got.begin(), got.end(), [](const sym::Rational& q) { return q != 0; })) {
          if (!offenders.empty()) offenders += "; ";
          offenders += "[" + table.names[i] + ", " + table.names[j] + "] = " + combination(got, table.names);
          const std::string fix = erratum_for(i, j);
          all_explained = all_explained && !fix.empty();
          if (!fix.empty()) errata += (errata.empty() ? "" : "; ") + fix;
        }
      }
    }
    CommutatorCheck check{"all other brackets vanish", offenders.empty() ? "0" : offenders, offenders.empty(), false, ""};
    if (!check.pass && all_explained) {
      check.explained = true;
      check.erratum = errata;
    }
    report.commutators.push_back(std::move(check));
  }
}

}  // namespace

int generator_rank(const std::vector<Generator>& gens, const Metric& m, std::uint64_t seed) {
  if (gens.empty()) return 0;
  const auto domain = m.sample_domain();
  sym::Rng rng(seed);
  std::vector<std::array<Expr, 5>> fields;
  for (const auto& g : gens) fields.push_back(g.components());
  const std::size_t want = std::max<std::size_t>(6, gens.size() / 5 + 4);
  std::vector<std::vector<double>> rows;
  for (int draw = 0; draw < 400 && rows.size() < 5 * want; ++draw) {
    const sym::Point p = domain.draw(rng);
    try {
      std::vector<std::vector<double>> block(5, std::vector<double>(gens.size()));
      for (std::size_t k = 0; k < gens.size(); ++k)
        for (std::size_t a = 0; a < 5; ++a) block[a][k] = sym::eval_numeric(fields[k][a], p);
      for (auto& row : block) rows.push_back(std::move(row));
    } catch (const sym::EvalError&) {
    }
  }
  Eigen::MatrixXd mat(rows.size(), gens.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < gens.size(); ++k) mat(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(mat);
  qr.setThreshold(1e-9);
  return static_cast<int>(qr.rank());
}

bool EntryReport::generators_pass() const {
  return std::all_of(generators.begin(), generators.end(), [](const GeneratorCheck& g) { return g.verified; });
}
bool EntryReport::dimension_pass() const {
  return verified_dimension == expected_dimension && static_cast<int>(generators.size()) == expected_dimension;
}
bool EntryReport::commutators_pass() const {
  return closed && jacobi_residual < 1e-9 && bracket_pairs_verified == bracket_pairs &&
         std::all_of(commutators.begin(), commutators.end(),
                     [](const CommutatorCheck& c) { return c.pass || c.explained; });
}
bool EntryReport::printed_commutators_pass() const {
  return std::all_of(commutators.begin(), commutators.end(), [](const CommutatorCheck& c) { return c.pass; });
}
bool EntryReport::drift_pass() const {
  return std::all_of(drifts.begin(), drifts.end(), [](const DriftCheck& d) { return d.pass; });
}
bool EntryReport::integrals_pass() const {
  return std::none_of(integrals.begin(), integrals.end(),
                      [](const IntegralCheck& i) { return i.outcome == IntegralOutcome::mismatch; });
}
bool EntryReport::pass() const { return generators_pass() && dimension_pass() && commutators_pass() && drift_pass(); }

EntryReport verify_entry(const CatalogEntry& e, std::uint64_t seed, const VerifyOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  EntryReport report;
  report.label = e.label();
  report.provenance = e.provenance;
  report.seed = seed;
  report.expected_dimension = e.expected_dimension;
  report.notes = e.notes;

  std::vector<Generator> effective;
  for (const auto& g : e.generators) {
    report.generators.push_back(check_generator(e.metric, g, seed));
    if (report.generators.back().verified) effective.push_back(report.generators.back().effective);
  }
  report.verified_dimension = generator_rank(effective, e.metric, seed);

  for (const auto& pf : e.printed) {
    Metric m = e.metric;
    if (pf.domain) m.domain = *pf.domain;
    const auto r = symmetry::verify_symmetry(m, pf.generator, seed);
    report.printed.push_back({pf.generator.name, r.status(),
                              pf.domain ? "(" + format_double(pf.domain->lo) + ", " + format_double(pf.domain->hi) + ")"
                                        : "metric domain"});
  }

  const Metric mc = e.metric.concrete();
  if (options.integrals) {
    for (const auto& gc : report.generators) report.integrals.push_back(check_integral(e, mc, gc.effective, seed));
  }

  std::vector<Generator> all;
  for (const auto& gc : report.generators) all.push_back(gc.effective);
  check_commutators(e, all, report, seed);
  if (options.closure) {
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = i + 1; j < all.size(); ++j) {
        Generator b = symmetry::lie_bracket(all[i], all[j]);
        b.gauge = symmetry::bracket_gauge(all[i], all[j]);
        ++report.bracket_pairs;
        if (symmetry::verify_symmetry(e.metric, b, seed).verified()) ++report.bracket_pairs_verified;
      }
    }
  }

  if (options.drift) {
    const spacetime::GeodesicSystem system(mc);
    std::vector<symmetry::FirstIntegral> integrals;
    for (const auto& g : all) integrals.push_back(symmetry::first_integral(mc, g, seed));
    for (const auto& g : all) report.drifts.push_back({g.name, 0.0, 0, true, ""});
    sym::Rng rng(seed ^ fnv1a(e.label()));
    for (int k = 0; k < options.trajectories; ++k) {
      const numeric::State init = numeric::random_initial_state(mc, rng);
      numeric::GeodesicTrajectory tr;
      try {
        tr = numeric::integrate_within_domain(system, init, options.length, options.tol);
      } catch (const std::exception& ex) {
        for (auto& d : report.drifts) {
          d.pass = false;
          d.error = std::string("integration failed: ") + ex.what();
        }
        continue;
      }
      for (std::size_t i = 0; i < all.size(); ++i) {
        auto& d = report.drifts[i];
        try {
          const auto drift = numeric::conservation_drift(system, tr, integrals[i]);
          d.max_drift = std::max(d.max_drift, drift.relative_drift);
          ++d.trajectories;
        } catch (const sym::EvalError& ex) {
          d.pass = false;
          d.error = ex.what();
        }
      }
    }
    for (auto& d : report.drifts) d.pass = d.pass && d.max_drift <= options.drift_limit;
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

// Bind parameter symbols to numbers; `m` overrides `fallback`.
Generator bind_parameters(const Generator& g, const Metric& m, const Metric& fallback) {
  std::map<Symbol, double> values = fallback.params;
  for (const auto& [s, v] : m.params) values[s] = v;
  std::vector<std::pair<Symbol, Expr>> bindings;
  for (const auto& [s, v] : values) bindings.emplace_back(s, Expr(sym::rationalize(v, 1000000)));
  Generator out = g;
  out.xi = sym::substitute(g.xi, bindings);
  for (auto& c : out.eta) c = sym::substitute(c, bindings);
  out.gauge = sym::substitute(g.gauge, bindings);
  return out;
}

void check_ansatz(const Expr& e, const char* which) {
  for (Symbol s : {Symbol::s, Symbol::t, Symbol::theta, Symbol::phi, Symbol::td, Symbol::rd, Symbol::thetad,
                   Symbol::phid}) {
    if (e.depends_on(s)) {
      throw std::invalid_argument(std::string("classify_metric: ") + which +
                                  " must depend on r only (static, spherically symmetric ansatz)");
    }
  }
}

}  // namespace

Classification classify_metric(const Metric& m, const std::vector<CatalogEntry>& catalog, std::uint64_t seed) {
  check_ansatz(m.nu, "nu");
  check_ansatz(m.mu, "mu");
  Classification out;
  std::vector<Generator> verified;
  for (const auto& e : catalog) {
    bool all = true;
    for (const auto& g : e.generators) {
      const Generator bound = bind_parameters(g, m, e.metric);
      const auto check = check_generator(m, bound, seed);
      if (check.verified) {
        verified.push_back(check.effective);
        out.verified.push_back(e.label() + ":" + g.name);
      } else {
        all = false;
      }
    }
    if (all && out.matched_entry.empty() && e.generators.size() > 5) out.matched_entry = e.label();
  }
  out.dimension = generator_rank(verified, m, seed);
  for (const char* cls : kClassIds) {
    if (class_dimension(cls) == out.dimension) out.class_id = cls;
  }
  if (out.class_id.empty()) {
    out.description = "unclassified (dimension " + std::to_string(out.dimension) + ")";
  } else if (out.class_id == "I") {
    out.description = "class I (minimal)";
  } else {
    out.description = "class " + out.class_id;
  }
  return out;
}

CatalogEntry perturb_generator(const CatalogEntry& e, std::uint64_t seed, std::string* which) {
  CatalogEntry out = e;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < out.generators.size(); ++i) {
    if (!is_minimal(out.generators[i].name)) candidates.push_back(i);
  }
  if (candidates.empty()) {
    for (std::size_t i = 0; i < out.generators.size(); ++i) candidates.push_back(i);
  }
  sym::Rng rng(seed);
  Generator& g = out.generators[candidates[static_cast<std::size_t>(
      rng.integer(0, static_cast<long>(candidates.size()) - 1))]];
  std::vector<Expr*> slots;
  static const char* kSlot[] = {"xi", "eta0", "eta1", "eta2", "eta3"};
  std::vector<int> slot_ids;
  Expr* all[] = {&g.xi, &g.eta[0], &g.eta[1], &g.eta[2], &g.eta[3]};
  for (int i = 0; i < 5; ++i) {
    if (!all[i]->is_zero_node()) {
      slots.push_back(all[i]);
      slot_ids.push_back(i);
    }
  }
  const auto pick = static_cast<std::size_t>(rng.integer(0, static_cast<long>(slots.size()) - 1));
  *slots[pick] = *slots[pick] * (Expr(1L) + Expr(Symbol::r) / Expr(7L));
  if (which) *which = g.name + "." + kSlot[slot_ids[pick]];
  return out;
}

CatalogEntry perturb_metric(const CatalogEntry& e) {
  CatalogEntry out = e;
  Expr delta = Expr(Symbol::r) / Expr(5L);
  if (e.class_id == "I") delta = delta * Expr(Symbol::t);
  out.metric.nu = out.metric.nu + delta;
  if (out.metric.standin_nu) out.metric.standin_nu = *out.metric.standin_nu + delta;
  out.metric.name += " (perturbed)";
  return out;
}

}  // namespace noether::catalog
