#include "noether/cli/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "noether/catalog/catalog.hpp"
#include "noether/catalog/determining.hpp"
#include "noether/catalog/verify.hpp"
#include "noether/numeric/geodesic.hpp"
#include "noether/spacetime/geometry.hpp"
#include "noether/symbolic/parser.hpp"
#include "noether/symmetry/algebra.hpp"

namespace noether::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using catalog::CatalogEntry;
using catalog::EntryReport;
using spacetime::Metric;
using symmetry::Generator;
using sym::Expr;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string metric;
  std::vector<std::string> gens;
  std::string cls;
  std::uint64_t seed = 42;
  std::optional<double> tol;
  std::string format = "text";
  std::string out;
  std::string lambda = "r2";
  double length = 10.0;
};

struct Result {
  int code = kExitPass;
  std::string text;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

// Paths that do not exist are also looked up in <catalog>/examples.
fs::path resolve(const std::string& p) {
  if (fs::exists(p)) return p;
  const fs::path alt = catalog::default_catalog_dir() / "examples" / fs::path(p).filename();
  if (fs::exists(alt)) return alt;
  throw UsageError("file not found: " + p);
}

Metric metric_arg(const Options& o) {
  if (o.metric.empty()) throw UsageError("--metric is required");
  return spacetime::load_metric(resolve(o.metric));
}

std::vector<Generator> gen_args(const Options& o, std::size_t min_count) {
  if (o.gens.size() < min_count) {
    throw UsageError(min_count == 1 ? "--gen is required" : "at least " + std::to_string(min_count) + " --gen flags");
  }
  std::vector<Generator> out;
  for (const auto& g : o.gens) out.push_back(symmetry::load_generator(resolve(g)));
  return out;
}

double tol_arg(const Options& o, double fallback) {
  const double tol = o.tol.value_or(fallback);
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw UsageError("--tol must lie in [1e-13, 1e-6]");
  return tol;
}

void require_format(const Options& o, std::initializer_list<const char*> allowed, const char* cmd) {
  for (const char* f : allowed) {
    if (o.format == f) return;
  }
  throw UsageError(std::string("--format ") + o.format + " is not available for " + cmd);
}

json header(const char* command, const Options& o) {
  return json{{"schema", kSchema}, {"schema_version", kSchemaVersion}, {"command", command}, {"seed", o.seed}};
}

json point_json(const sym::Point& p) {
  json j = json::object();
  for (std::size_t i = 0; i < sym::kSymbolCount; ++i) {
    const auto s = static_cast<sym::Symbol>(i);
    if (auto v = p.get(s)) j[std::string(sym::symbol_name(s))] = *v;
  }
  return j;
}

std::string witness_text(const std::optional<sym::Point>& w, double value) {
  if (!w) return "";
  return "witness " + w->to_string() + " value " + fmt(value);
}

// ---------------------------------------------------------------- catalog-verify

std::vector<CatalogEntry> select_entries(const std::string& cls) {
  auto all = catalog::load_catalog();
  if (cls.empty()) return all;
  std::vector<CatalogEntry> out;
  for (auto& e : all) {
    if (e.class_id == cls || e.label() == cls) out.push_back(std::move(e));
  }
  if (out.empty()) throw UsageError("no catalog entry matches --class " + cls);
  return out;
}

json report_json(const EntryReport& r) {
  json j{{"entry", r.label}, {"provenance", r.provenance}, {"pass", r.pass()},
         {"expected_dimension", r.expected_dimension}, {"verified_dimension", r.verified_dimension}};
  json gens = json::array();
  for (const auto& g : r.generators) {
    json x{{"name", g.name}, {"status", g.status}, {"verified", g.verified}, {"killing", g.killing}};
    if (!g.gauge_correction.empty()) x["gauge_correction"] = g.gauge_correction;
    if (g.witness) x["witness"] = {{"point", point_json(*g.witness)}, {"value", g.witness_value}};
    gens.push_back(std::move(x));
  }
  j["generators"] = std::move(gens);
  json ints = json::array();
  for (const auto& i : r.integrals) {
    json x{{"generator", i.generator}, {"outcome", catalog::outcome_name(i.outcome)}, {"engine", i.engine}};
    if (i.outcome == catalog::IntegralOutcome::matched || i.outcome == catalog::IntegralOutcome::matched_erratum) {
      x["table"] = i.table;
      x["factor"] = i.factor_rational;
      x["offset"] = i.offset;
    }
    if (!i.reason.empty()) x["reason"] = i.reason;
    ints.push_back(std::move(x));
  }
  j["integrals"] = std::move(ints);
  json drifts = json::array();
  for (const auto& d : r.drifts) {
    json x{{"generator", d.generator}, {"max_drift", d.max_drift}, {"trajectories", d.trajectories}, {"pass", d.pass}};
    if (!d.error.empty()) x["error"] = d.error;
    drifts.push_back(std::move(x));
  }
  j["drift"] = std::move(drifts);
  json comms = json::array();
  for (const auto& c : r.commutators) {
    json x{{"printed", c.relation}, {"engine", c.engine}, {"pass", c.pass}};
    if (c.explained) x["erratum"] = c.erratum;
    comms.push_back(std::move(x));
  }
  j["commutators"] = std::move(comms);
  j["closure"] = {{"closed", r.closed},
                  {"jacobi_residual", r.jacobi_residual},
                  {"pairs_verified", r.bracket_pairs_verified},
                  {"pairs", r.bracket_pairs}};
  if (!r.closure_error.empty()) j["closure"]["error"] = r.closure_error;
  json printed = json::array();
  for (const auto& p : r.printed) printed.push_back({{"generator", p.generator}, {"status", p.status}, {"domain", p.domain}});
  j["printed_forms"] = std::move(printed);
  j["notes"] = r.notes;
  return j;
}

std::string report_text(const EntryReport& r) {
  std::ostringstream os;
  int direct = 0, errata = 0, missing = 0;
  for (const auto& i : r.integrals) {
    direct += i.outcome == catalog::IntegralOutcome::matched;
    errata += i.outcome == catalog::IntegralOutcome::matched_erratum;
    missing += i.outcome == catalog::IntegralOutcome::no_table_entry;
  }
  double worst = 0.0;
  for (const auto& d : r.drifts) worst = std::max(worst, d.max_drift);
  int verified = 0;
  for (const auto& g : r.generators) verified += g.verified;
  os << r.label << "  " << (r.pass() ? "PASS" : "FAIL") << "  dimension " << r.verified_dimension << "/"
     << r.expected_dimension << "  generators " << verified << "/" << r.generators.size() << "  integrals " << direct
     << " matched, " << errata << " via errata, " << missing << " without table entry";
  if (!r.drifts.empty()) os << "  max drift " << fmt(worst);
  os << "  brackets " << r.bracket_pairs_verified << "/" << r.bracket_pairs << "\n";
  if (r.provenance != "printed") os << "  provenance: " << r.provenance << "\n";
  for (const auto& g : r.generators) {
    if (!g.verified) os << "  generator " << g.name << " " << g.status << " " << witness_text(g.witness, g.witness_value) << "\n";
    if (!g.gauge_correction.empty()) os << "  gauge " << g.name << ": " << g.gauge_correction << "\n";
  }
  for (const auto& i : r.integrals) {
    if (i.outcome == catalog::IntegralOutcome::matched_erratum) {
      os << "  integral " << i.generator << " via erratum (factor " << i.factor_rational << "): " << i.reason << "\n";
    } else if (i.outcome == catalog::IntegralOutcome::mismatch) {
      os << "  integral " << i.generator << " MISMATCH: " << i.reason << "\n";
    }
  }
  for (const auto& d : r.drifts) {
    if (!d.pass) os << "  drift " << d.generator << " " << fmt(d.max_drift) << (d.error.empty() ? "" : " " + d.error) << "\n";
  }
  for (const auto& c : r.commutators) {
    if (c.pass) continue;
    os << "  commutator " << c.relation << ": engine " << c.engine;
    if (c.explained) os << "; corrected " << c.erratum;
    os << "\n";
  }
  if (!r.closure_error.empty()) os << "  closure: " << r.closure_error << "\n";
  for (const auto& p : r.printed) os << "  printed form " << p.generator << ": " << p.status << " on " << p.domain << "\n";
  return os.str();
}

Result catalog_verify(const Options& o) {
  require_format(o, {"text", "structured"}, "catalog-verify");
  catalog::VerifyOptions vo;
  vo.tol = tol_arg(o, vo.tol);
  const auto entries = select_entries(o.cls);
  std::vector<EntryReport> reports;
  for (const auto& e : entries) reports.push_back(catalog::verify_entry(e, o.seed, vo));

  int passed = 0;
  std::map<int, int> histogram;
  for (const auto& r : reports) {
    passed += r.pass();
    ++histogram[r.verified_dimension];
  }
  Result res;
  res.code = passed == static_cast<int>(reports.size()) ? kExitPass : kExitFail;
  if (o.format == "structured") {
    json j = header("catalog-verify", o);
    j["tol"] = vo.tol;
    j["entries"] = json::array();
    for (const auto& r : reports) j["entries"].push_back(report_json(r));
    json h = json::object();
    for (const auto& [d, n] : histogram) h[std::to_string(d)] = n;
    j["summary"] = {{"entries", reports.size()}, {"passed", passed}, {"dimension_histogram", h}};
    res.text = j.dump(2) + "\n";
    return res;
  }
  std::ostringstream os;
  os << "seed: " << o.seed << "\n";
  for (const auto& r : reports) os << report_text(r);
  os << passed << "/" << reports.size() << " entries PASS\n";
  os << "verified dimensions:";
  for (const auto& [d, n] : histogram) os << " " << d << " (x" << n << ")";
  os << "\n";
  res.text = os.str();
  return res;
}

// ---------------------------------------------------------------- residual

Result residual(const Options& o) {
  require_format(o, {"text", "structured"}, "residual");
  const Metric m = metric_arg(o);
  const auto gens = gen_args(o, 1);
  Result res;
  json list = json::array();
  std::ostringstream os;
  os << "seed: " << o.seed << "\nmetric: " << m.name << "\n";
  for (const auto& g : gens) {
    const auto v = symmetry::verify_symmetry(m, g, o.seed);
    if (!v.verified()) res.code = kExitFail;
    json x{{"generator", g.name}, {"status", v.status()}, {"verified", v.verified()},
           {"residual", sym::to_string(v.residual)}};
    os << g.name << ": " << v.status() << "\n  residual: " << sym::to_string(v.residual) << "\n";
    if (v.decision.witness) {
      x["witness"] = {{"point", point_json(*v.decision.witness)}, {"value", v.decision.witness_value}};
      os << "  " << witness_text(v.decision.witness, v.decision.witness_value) << "\n";
    }
    if (v.status() == "numeric-zero") {
      os << "  status downgraded: " << v.decision.stats.below_tolerance << "/" << v.decision.stats.samples
         << " samples below 1e-9\n";
    }
    if (!v.verified()) {
      const auto c = catalog::check_generator(m, g, o.seed);
      if (c.verified && !c.gauge_correction.empty()) {
        x["gauge_hint"] = c.gauge_correction;
        os << "  hint: " << c.gauge_correction << "\n";
      }
    }
    list.push_back(std::move(x));
  }
  if (o.format == "structured") {
    json j = header("residual", o);
    j["metric"] = m.name;
    j["generators"] = std::move(list);
    res.text = j.dump(2) + "\n";
  } else {
    res.text = os.str();
  }
  return res;
}

// ---------------------------------------------------------------- determining

Result determining(const Options& o) {
  require_format(o, {"text", "structured", "latex"}, "determining");
  spacetime::LambdaBranch branch;
  if (o.lambda == "r2") {
    branch = spacetime::LambdaBranch::radius_squared;
  } else if (o.lambda == "unit") {
    branch = spacetime::LambdaBranch::unit;
  } else {
    throw UsageError("--lambda must be r2 or unit");
  }
  const auto ds = symmetry::determining_system(branch);
  std::optional<catalog::SystemComparison> cmp;
  const auto root = catalog::default_catalog_dir();
  if (fs::exists(root / "determining" / (std::string(spacetime::branch_name(branch)) + ".txt"))) {
    cmp = catalog::compare_printed_system(ds, catalog::load_printed_system(root, branch), o.seed);
  }
  Result res;
  if (o.format == "latex") {
    res.text = ds.to_latex();
    return res;
  }
  if (o.format == "structured") {
    json j = header("determining", o);
    j["lambda"] = o.lambda;
    j["count"] = ds.nonredundant.size();
    json eqs = json::array();
    for (const auto& e : ds.nonredundant) {
      json dup = json::array();
      for (const auto& d : e.duplicates) dup.push_back(d.label());
      eqs.push_back({{"monomial", e.monomial.label()}, {"equation", sym::to_string(e.normalized)},
                     {"latex", sym::to_latex(e.normalized)}, {"duplicates", dup}});
    }
    j["equations"] = std::move(eqs);
    if (cmp) {
      json m = json::array();
      for (const auto& x : cmp->matches) {
        m.push_back({{"printed", x.index}, {"matched", x.matched()}, {"direct", x.direct}, {"monomial", x.monomial},
                     {"factor", x.factor}});
      }
      j["printed_comparison"] = {{"matches", m}, {"discrepancies", cmp->discrepancies()}};
    }
    res.text = j.dump(2) + "\n";
    return res;
  }
  std::ostringstream os;
  os << ds.to_text();
  if (cmp) {
    int direct = 0, corrected = 0;
    for (const auto& x : cmp->matches) {
      direct += x.direct;
      corrected += x.corrected;
    }
    os << "printed list: " << cmp->matches.size() << " equations, " << direct << " match as printed, " << corrected
       << " after correction\n";
    for (const auto& d : cmp->discrepancies()) os << "  " << d << "\n";
  }
  res.text = os.str();
  return res;
}

// ---------------------------------------------------------------- integral

Result integral(const Options& o) {
  require_format(o, {"text", "structured"}, "integral");
  const Metric m = metric_arg(o);
  const auto gens = gen_args(o, 1);
  const double tol = tol_arg(o, 1e-10);
  const Metric concrete = m.concrete();
  const spacetime::GeodesicSystem sys(concrete);
  Result res;
  json list = json::array();
  std::ostringstream os;
  os << "seed: " << o.seed << "\nmetric: " << m.name << "\n";
  for (const auto& g : gens) {
    const auto fi = symmetry::first_integral(m, g, o.seed);
    const auto check = catalog::check_generator(m, g, o.seed);
    if (!check.verified) res.code = kExitFail;
    json x{{"generator", g.name}, {"integral", sym::to_string(fi.expr)}, {"verified", check.verified}};
    os << g.name << ": I = " << sym::to_string(fi.expr) << "\n";
    if (!fi.note.empty()) {
      x["note"] = fi.note;
      os << "  note: " << fi.note << "\n";
    }
    if (check.verified) {
      const auto cfi = symmetry::first_integral(concrete, check.effective, o.seed);
      sym::Rng rng(o.seed);
      double worst = 0.0;
      std::string error;
      for (int k = 0; k < 5; ++k) {
        try {
          const auto tr = numeric::integrate_within_domain(sys, numeric::random_initial_state(concrete, rng), o.length, tol);
          worst = std::max(worst, numeric::conservation_drift(sys, tr, cfi).relative_drift);
        } catch (const std::exception& ex) {
          error = ex.what();
        }
      }
      const bool ok = error.empty() && worst <= 1e-6;
      if (!ok) res.code = kExitFail;
      x["drift"] = {{"max_relative", worst}, {"trajectories", 5}, {"length", o.length}, {"tol", tol}, {"pass", ok}};
      os << "  drift over 5 geodesics: " << fmt(worst) << (ok ? " PASS" : " FAIL") << (error.empty() ? "" : " (" + error + ")")
         << "\n";
    }
    list.push_back(std::move(x));
  }
  if (o.format == "structured") {
    json j = header("integral", o);
    j["metric"] = m.name;
    j["integrals"] = std::move(list);
    res.text = j.dump(2) + "\n";
  } else {
    res.text = os.str();
  }
  return res;
}

// ---------------------------------------------------------------- brackets

Result brackets(const Options& o) {
  require_format(o, {"text", "structured"}, "brackets");
  Result res;
  std::ostringstream os;
  os << "seed: " << o.seed << "\n";
  json j = header("brackets", o);
  if (!o.cls.empty()) {
    catalog::VerifyOptions vo;
    vo.integrals = false;
    vo.drift = false;
    json list = json::array();
    for (const auto& e : select_entries(o.cls)) {
      const auto r = catalog::verify_entry(e, o.seed, vo);
      if (!r.commutators_pass()) res.code = kExitFail;
      std::vector<Generator> basis;
      for (const auto& g : r.generators) basis.push_back(g.effective);
      os << r.label << "  " << (r.commutators_pass() ? "PASS" : "FAIL") << "  jacobi " << fmt(r.jacobi_residual)
         << "  closure " << r.bracket_pairs_verified << "/" << r.bracket_pairs << "\n";
      json x{{"entry", r.label}, {"pass", r.commutators_pass()}, {"jacobi_residual", r.jacobi_residual},
             {"pairs_verified", r.bracket_pairs_verified}, {"pairs", r.bracket_pairs}};
      json rel = json::array();
      try {
        const auto table = symmetry::commutator_table(basis, e.metric.sample_domain(), o.seed);
        for (const auto& line : table.relations()) {
          os << "  " << line << "\n";
          rel.push_back(line);
        }
      } catch (const std::exception& ex) {
        os << "  " << ex.what() << "\n";
      }
      x["relations"] = std::move(rel);
      json printed = json::array();
      for (const auto& c : r.commutators) {
        os << "  printed " << c.relation << ": " << (c.pass ? "verified" : "engine " + c.engine);
        if (c.explained) os << "; corrected " << c.erratum;
        os << "\n";
        printed.push_back({{"printed", c.relation}, {"engine", c.engine}, {"pass", c.pass}, {"explained", c.explained}});
      }
      x["printed"] = std::move(printed);
      list.push_back(std::move(x));
    }
    j["entries"] = std::move(list);
  } else {
    const Metric m = metric_arg(o);
    const auto gens = gen_args(o, 2);
    std::vector<Generator> basis;
    for (const auto& g : gens) {
      const auto c = catalog::check_generator(m, g, o.seed);
      if (!c.verified) {
        res.code = kExitFail;
        os << g.name << " is not a Noether symmetry: " << witness_text(c.witness, c.witness_value) << "\n";
      }
      basis.push_back(c.effective);
    }
    json rel = json::array();
    try {
      const auto table = symmetry::commutator_table(basis, m.sample_domain(), o.seed);
      for (const auto& line : table.relations()) {
        os << line << "\n";
        rel.push_back(line);
      }
      os << "jacobi residual " << fmt(table.jacobi_residual) << "\n";
      j["jacobi_residual"] = table.jacobi_residual;
      if (table.jacobi_residual >= 1e-9) res.code = kExitFail;
    } catch (const std::exception& ex) {
      res.code = kExitFail;
      os << "not closed: " << ex.what() << "\n";
      j["error"] = ex.what();
    }
    j["metric"] = m.name;
    j["relations"] = std::move(rel);
  }
  res.text = o.format == "structured" ? j.dump(2) + "\n" : os.str();
  return res;
}

// ---------------------------------------------------------------- curvature

Result curvature(const Options& o) {
  require_format(o, {"text", "structured", "latex"}, "curvature");
  const Metric m = metric_arg(o);
  const auto c = spacetime::curvature(m);
  const auto sym_check = spacetime::check_riemann_symmetries(m, c, 100, o.seed);
  Result res;
  res.code = sym_check.ok ? kExitPass : kExitFail;
  static const char* kIdx[] = {"t", "r", "theta", "phi"};
  const bool latex = o.format == "latex";
  auto show = [&](const Expr& e) { return latex ? sym::to_latex(e) : sym::to_string(e); };
  if (o.format == "structured") {
    json j = header("curvature", o);
    j["metric"] = m.name;
    json riem = json::array();
    for (const auto& [k, e] : c.riemann_independent) {
      riem.push_back({{"indices", {kIdx[k[0]], kIdx[k[1]], kIdx[k[2]], kIdx[k[3]]}}, {"value", sym::to_string(e)}});
    }
    json ric = json::array();
    for (const auto& [k, e] : c.ricci) ric.push_back({{"indices", {kIdx[k.first], kIdx[k.second]}}, {"value", sym::to_string(e)}});
    j["riemann"] = std::move(riem);
    j["ricci"] = std::move(ric);
    j["ricci_scalar"] = sym::to_string(c.ricci_scalar);
    j["riemann_symmetries"] = {{"ok", sym_check.ok}, {"max_residual", sym_check.max_residual}};
    res.text = j.dump(2) + "\n";
    return res;
  }
  std::ostringstream os;
  if (!latex) os << "metric: " << m.name << "\n";
  os << (latex ? "% nonzero R_{abcd}\n" : "nonzero R_abcd:\n");
  for (const auto& [k, e] : c.riemann_independent) {
    os << "  R_" << kIdx[k[0]] << kIdx[k[1]] << kIdx[k[2]] << kIdx[k[3]] << " = " << show(e) << "\n";
  }
  os << (latex ? "% nonzero R_{ab}\n" : "nonzero R_ab:\n");
  if (c.ricci.empty()) os << "  none\n";
  for (const auto& [k, e] : c.ricci) os << "  R_" << kIdx[k.first] << kIdx[k.second] << " = " << show(e) << "\n";
  os << "R = " << show(c.ricci_scalar) << "\n";
  if (!sym_check.ok) os << "Riemann symmetries violated, max residual " << fmt(sym_check.max_residual) << "\n";
  res.text = os.str();
  return res;
}

// ---------------------------------------------------------------- geodesic

Result geodesic(const Options& o) {
  require_format(o, {"text", "structured"}, "geodesic");
  const Metric m = metric_arg(o).concrete();
  const double tol = tol_arg(o, 1e-10);
  std::vector<Generator> gens;
  if (!o.gens.empty()) gens = gen_args(o, 1);
  const spacetime::GeodesicSystem sys(m);
  sym::Rng rng(o.seed);
  Result res;
  numeric::GeodesicTrajectory tr;
  try {
    tr = numeric::integrate_within_domain(sys, numeric::random_initial_state(m, rng), o.length, tol);
  } catch (const numeric::DomainExitError& ex) {
    res.code = kExitFail;
    res.text = "seed: " + std::to_string(o.seed) + "\ndomain exit: " + ex.what() + " (last valid s = " +
               fmt(ex.last_valid_s()) + ")\n";
    return res;
  }
  std::vector<numeric::DriftReport> drifts;
  for (const auto& g : gens) {
    const auto check = catalog::check_generator(m, g, o.seed);
    auto d = numeric::conservation_drift(sys, tr, symmetry::first_integral(m, check.effective, o.seed));
    d.integral = g.name;
    if (!check.verified || d.relative_drift > 1e-6) res.code = kExitFail;
    drifts.push_back(d);
  }
  if (o.format == "structured") {
    json j = header("geodesic", o);
    j["metric"] = m.name;
    j["tol"] = tol;
    j["steps"] = tr.stats.steps;
    j["rejected"] = tr.stats.rejected;
    json samples = json::array();
    for (std::size_t i = 0; i < tr.s.size(); ++i) {
      json row = json::array({tr.s[i]});
      for (double v : tr.states[i]) row.push_back(v);
      samples.push_back(std::move(row));
    }
    j["columns"] = {"s", "t", "r", "theta", "phi", "td", "rd", "thetad", "phid"};
    j["samples"] = std::move(samples);
    json dj = json::array();
    for (const auto& d : drifts) {
      dj.push_back({{"generator", d.integral}, {"initial", d.initial}, {"max_abs_change", d.max_abs_change},
                    {"relative_drift", d.relative_drift}});
    }
    j["drift"] = std::move(dj);
    res.text = j.dump(2) + "\n";
    return res;
  }
  std::ostringstream os;
  os << numeric::export_trajectory(tr, o.seed);
  for (const auto& d : drifts) os << "# drift " << d.integral << ": " << fmt(d.relative_drift) << "\n";
  res.text = os.str();
  return res;
}

// ---------------------------------------------------------------- classify

Result classify(const Options& o) {
  require_format(o, {"text", "structured"}, "classify");
  const Metric m = metric_arg(o);
  catalog::Classification c;
  try {
    c = catalog::classify_metric(m, catalog::load_catalog(), o.seed);
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
  Result res;
  res.code = c.class_id.empty() ? kExitFail : kExitPass;
  if (o.format == "structured") {
    json j = header("classify", o);
    j["metric"] = m.name;
    j["class"] = c.class_id;
    j["description"] = c.description;
    j["dimension"] = c.dimension;
    j["matched_entry"] = c.matched_entry;
    j["verified"] = c.verified;
    res.text = j.dump(2) + "\n";
    return res;
  }
  std::ostringstream os;
  os << "seed: " << o.seed << "\nmetric: " << m.name << "\n" << c.description << ", " << c.dimension
     << " Noether symmetries\n";
  if (!c.matched_entry.empty()) os << "matches catalog entry " << c.matched_entry << "\n";
  res.text = os.str();
  return res;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noether symmetry verification for static spherically symmetric spacetimes", "noether"};
  app.require_subcommand(1);
  Options o;

  auto add = [&](const char* name, const char* description, bool metric, bool gen, bool cls) {
    CLI::App* sub = app.add_subcommand(name, description);
    if (metric) sub->add_option("--metric", o.metric, "metric file");
    if (gen) sub->add_option("--gen", o.gens, "generator file (repeatable)");
    if (cls) sub->add_option("--class", o.cls, "class I..VI or entry label such as III(2)");
    sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
    sub->add_option("--tol", o.tol, "integrator tolerance");
    sub->add_option("--format", o.format, "text, structured or latex")->capture_default_str();
    sub->add_option("--out", o.out, "write the report to a file");
    return sub;
  };
  auto* verify_cmd = add("catalog-verify", "verify catalog entries", false, false, true);
  auto* residual_cmd = add("residual", "Noether residual of generators on a metric", true, true, false);
  auto* determining_cmd = add("determining", "determining equations of the generic metric", false, false, false);
  determining_cmd->add_option("--lambda", o.lambda, "r2 or unit")->capture_default_str();
  auto* integral_cmd = add("integral", "first integrals and their numeric conservation", true, true, false);
  integral_cmd->add_option("--length", o.length, "affine length")->capture_default_str();
  auto* brackets_cmd = add("brackets", "commutator table and closure", true, true, true);
  auto* curvature_cmd = add("curvature", "Riemann, Ricci and scalar curvature", true, false, false);
  auto* geodesic_cmd = add("geodesic", "integrate a seeded geodesic", true, true, false);
  geodesic_cmd->add_option("--length", o.length, "affine length")->capture_default_str();
  auto* classify_cmd = add("classify", "count verified catalog symmetries of a metric", true, false, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "noether: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  Result res;
  try {
    if (verify_cmd->parsed()) res = catalog_verify(o);
    else if (residual_cmd->parsed()) res = residual(o);
    else if (determining_cmd->parsed()) res = determining(o);
    else if (integral_cmd->parsed()) res = integral(o);
    else if (brackets_cmd->parsed()) res = brackets(o);
    else if (curvature_cmd->parsed()) res = curvature(o);
    else if (geodesic_cmd->parsed()) res = geodesic(o);
    else if (classify_cmd->parsed()) res = classify(o);
  } catch (const UsageError& e) {
    err << "noether: " << e.what() << "\n";
    return kExitUsage;
  } catch (const spacetime::MetricParseError& e) {
    err << "noether: metric: " << e.what() << "\n";
    return kExitUsage;
  } catch (const symmetry::GeneratorParseError& e) {
    err << "noether: generator: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sym::ParseError& e) {
    err << "noether: " << e.what() << "\n";
    return kExitUsage;
  } catch (const catalog::CatalogError& e) {
    err << "noether: catalog: " << e.what() << "\n";
    return kExitUsage;
  }

  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) {
      err << "noether: cannot write " << o.out << "\n";
      return kExitUsage;
    }
    f << res.text;
  } else {
    out << res.text;
  }
  return res.code;
}

}  // namespace noether::cli
