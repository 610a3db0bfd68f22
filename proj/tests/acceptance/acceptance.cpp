// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is 0 when every criterion passes or fails only on printed
// expressions that the catalog records as misprints (expected failures).

#include <array>
#include <chrono>
#include <functional>
#include <iomanip>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "../support/curvature_oracle.hpp"
#include "noether/catalog/catalog.hpp"
#include "noether/catalog/determining.hpp"
#include "noether/catalog/verify.hpp"
#include "noether/cli/cli.hpp"
#include "noether/spacetime/geometry.hpp"
#include "noether/symbolic/calculus.hpp"
#include "noether/symbolic/evaluate.hpp"
#include "noether/symbolic/parser.hpp"

using namespace noether;
using catalog::EntryReport;
using catalog::IntegralOutcome;
using sym::Expr;

namespace {

enum class Verdict { pass, expected_fail, fail };

struct Criterion {
  int id;
  std::string title;
  Verdict verdict = Verdict::fail;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

// ---------------------------------------------------------------- 1

Criterion catalog_verification(const std::vector<catalog::CatalogEntry>& entries,
                               const std::vector<EntryReport>& reports) {
  Criterion c{1, "catalog verification"};
  std::map<std::string, std::set<int>> dims;
  int passed = 0, generators = 0, numeric = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    passed += r.pass();
    dims[entries[i].class_id].insert(r.verified_dimension);
    for (const auto& g : r.generators) {
      ++generators;
      if (g.status == "numeric-zero") {
        ++numeric;
        c.details.push_back(r.label + " " + g.name + ": numeric-zero (100/100 samples below 1e-9)");
      }
      if (!g.gauge_correction.empty()) c.details.push_back(r.label + " " + g.name + ": " + g.gauge_correction);
    }
    if (!r.pass()) c.details.push_back(r.label + ": FAIL");
  }
  std::string histogram;
  bool dims_ok = true;
  for (const char* cls : catalog::kClassIds) {
    const auto& d = dims[cls];
    dims_ok = dims_ok && d == std::set<int>{catalog::class_dimension(cls)};
    histogram += std::string(histogram.empty() ? "" : ", ") + cls + ":";
    for (int v : d) histogram += std::to_string(v);
  }
  const bool ok = passed == static_cast<int>(reports.size()) && dims_ok;
  c.verdict = ok ? Verdict::pass : Verdict::fail;
  c.summary = std::to_string(passed) + "/" + std::to_string(reports.size()) + " entries, " + std::to_string(generators) +
              " generators (" + std::to_string(numeric) + " numeric-zero), dimensions " + histogram;
  return c;
}

// ---------------------------------------------------------------- 2

Criterion determining_system() {
  Criterion c{2, "determining system"};
  const auto ds = symmetry::determining_system(spacetime::LambdaBranch::radius_squared);
  const auto printed =
      catalog::load_printed_system(catalog::default_catalog_dir(), spacetime::LambdaBranch::radius_squared);
  const auto cmp = catalog::compare_printed_system(ds, printed);
  int direct = 0, corrected = 0;
  for (const auto& m : cmp.matches) {
    direct += m.direct;
    corrected += m.corrected;
  }
  const bool ok = ds.nonredundant.size() == 19 && printed.size() == 19 && cmp.all_matched();
  c.verdict = ok ? Verdict::pass : Verdict::fail;
  c.summary = std::to_string(ds.nonredundant.size()) + " nonredundant equations; " +
              std::to_string(direct + corrected) + "/" + std::to_string(printed.size()) + " printed equations matched (" +
              std::to_string(direct) + " as printed, " + std::to_string(corrected) + " after logged correction)";
  for (const auto& d : cmp.discrepancies()) c.details.push_back(d);
  return c;
}

// ---------------------------------------------------------------- 3

Criterion first_integrals(const std::vector<EntryReport>& reports) {
  Criterion c{3, "first integrals"};
  int direct = 0, corrected = 0, untabulated = 0, mismatch = 0;
  std::map<std::string, std::vector<std::string>> errata;  // reason -> entry:generator
  for (const auto& r : reports) {
    for (const auto& i : r.integrals) {
      const std::string where = r.label + ":" + i.generator;
      switch (i.outcome) {
        case IntegralOutcome::matched: ++direct; break;
        case IntegralOutcome::matched_erratum:
          ++corrected;
          errata[i.reason].push_back(where + " (k=" + i.factor_rational + ")");
          break;
        case IntegralOutcome::no_table_entry: ++untabulated; break;
        case IntegralOutcome::mismatch:
          ++mismatch;
          c.details.push_back("unexplained mismatch " + where + ": " + i.reason);
          break;
      }
    }
  }
  const int tabulated = direct + corrected + mismatch;
  c.summary = std::to_string(direct) + "/" + std::to_string(tabulated) + " printed table integrals match the engine up to a constant factor; " +
              std::to_string(corrected) + " contradict it and match only the catalogued corrected form; " +
              std::to_string(untabulated) + " generators have no table row";
  if (mismatch == 0 && corrected == 0) {
    c.verdict = Verdict::pass;
  } else {
    c.verdict = mismatch == 0 ? Verdict::expected_fail : Verdict::fail;
  }
  for (const auto& [reason, where] : errata) {
    std::string line = reason + ":";
    const std::size_t shown = std::min<std::size_t>(where.size(), 4);
    for (std::size_t k = 0; k < shown; ++k) line += " " + where[k];
    if (where.size() > shown) line += " and " + std::to_string(where.size() - shown) + " more";
    c.details.push_back(line);
  }
  if (mismatch == 0) c.details.push_back("every engine integral matches its printed or corrected table row");
  return c;
}

// ---------------------------------------------------------------- 4

Criterion conservation(const std::vector<EntryReport>& reports) {
  Criterion c{4, "conservation"};
  int checks = 0, failed = 0;
  double worst = 0.0;
  std::string worst_at;
  for (const auto& r : reports) {
    for (const auto& d : r.drifts) {
      ++checks;
      if (!d.pass) {
        ++failed;
        c.details.push_back(r.label + " " + d.generator + ": drift " + fmt(d.max_drift) + " " + d.error);
      }
      if (d.max_drift > worst) {
        worst = d.max_drift;
        worst_at = r.label + " " + d.generator;
      }
    }
  }
  c.verdict = failed == 0 && checks > 0 ? Verdict::pass : Verdict::fail;
  c.summary = std::to_string(checks - failed) + "/" + std::to_string(checks) +
              " integrals within 1e-6 over 5 geodesics each (length 10, tol 1e-10); worst " + fmt(worst) + " at " + worst_at;
  return c;
}

// ---------------------------------------------------------------- 5

Criterion commutators(const std::vector<EntryReport>& reports) {
  Criterion c{5, "commutators"};
  int printed = 0, verified = 0, explained = 0, pairs = 0, pairs_ok = 0, closed = 0;
  double jacobi = 0.0;
  for (const auto& r : reports) {
    closed += r.closed;
    jacobi = std::max(jacobi, r.jacobi_residual);
    pairs += r.bracket_pairs;
    pairs_ok += r.bracket_pairs_verified;
    for (const auto& x : r.commutators) {
      ++printed;
      verified += x.pass;
      explained += !x.pass && x.explained;
      if (!x.pass) {
        c.details.push_back(r.label + " printed " + x.relation + "; engine " + x.engine +
                            (x.explained ? "; catalogued correction " + x.erratum : "; UNEXPLAINED"));
      }
    }
  }
  const bool closure_ok = closed == static_cast<int>(reports.size()) && jacobi < 1e-9 && pairs_ok == pairs;
  c.summary = std::to_string(verified) + "/" + std::to_string(printed) + " printed relations verify as printed; " +
              std::to_string(explained) + " contradicted with a catalogued correction; closure " + std::to_string(pairs_ok) +
              "/" + std::to_string(pairs) + " brackets verified, max Jacobi residual " + fmt(jacobi);
  if (verified == printed && closure_ok) {
    c.verdict = Verdict::pass;
  } else {
    c.verdict = closure_ok && verified + explained == printed ? Verdict::expected_fail : Verdict::fail;
  }
  if (closure_ok) c.details.push_back("every catalog basis is closed and satisfies Jacobi; all corrected relations verify");
  return c;
}

// ---------------------------------------------------------------- 6

struct ListedCurvature {
  const char* name;
  const char* metric;
  std::function<oracle::Coords(const oracle::Coords&)> oracle_metric;
  std::map<std::array<int, 4>, const char*> riemann;
  std::map<std::pair<int, int>, const char*> ricci;
  const char* scalar;
};

// Sign s with engine = s * listed, or 0.
int sign_between(const Expr& engine, const Expr& listed, const sym::SampleDomain& d) {
  if (sym::is_zero(engine - listed, d).accepted_zero()) return 1;
  if (sym::is_zero(engine + listed, d).accepted_zero()) return -1;
  return 0;
}

Criterion curvature() {
  Criterion c{6, "curvature"};
  bool ok = true;

  const auto schw = spacetime::parse_metric(
      "nu = ln(1 - alpha/r)\nmu = -ln(1 - alpha/r)\nlambda = r2\nparams.alpha = 1\ndomain = (1.5, 10)\n", "Schwarzschild");
  const auto sc = spacetime::curvature(schw);
  const bool ricci_flat = sc.ricci.empty() && sc.ricci_scalar.is_zero_node();
  ok = ok && ricci_flat;
  c.details.push_back(std::string("Schwarzschild: Ricci tensor ") + (ricci_flat ? "identically zero (symbolic)" : "NOT zero"));

  const double a = 2.0;
  const std::vector<ListedCurvature> cases = {
      {"(i)", "nu = 2*ln(sec(r/a))\nmu = 2*ln(sec(r/a))\nlambda = unit\nparams.a = 2\ndomain = (-3.1, 3.1)\n",
       [a](const oracle::Coords& x) {
         const double f = 1.0 / std::pow(std::cos(x[1] / a), 2);
         return oracle::Coords{f, -f, -1.0, -std::pow(std::sin(x[2]), 2)};
       },
       {{{0, 1, 0, 1}, "-sec(r/a)^4/a^2"}, {{2, 3, 2, 3}, "-sin(theta)^2"}},
       {{{0, 0}, "-sec(r/a)^2/a^2"}, {{1, 1}, "sec(r/a)^2/a^2"}, {{2, 2}, "-1"}, {{3, 3}, "-sin(theta)^2"}},
       "2*(a^2 - 1)/a^2"},
      {"(ii)", "nu = 2*ln(a/r)\nmu = 2*ln(a/r)\nlambda = unit\nparams.a = 2\ndomain = (0.2, 5)\n",
       [a](const oracle::Coords& x) {
         const double f = a * a / (x[1] * x[1]);
         return oracle::Coords{f, -f, -1.0, -std::pow(std::sin(x[2]), 2)};
       },
       {{{0, 1, 0, 1}, "-a^2/r^4"}, {{2, 3, 2, 3}, "-sin(theta)^2"}},
       {{{0, 0}, "-1/r^2"}, {{1, 1}, "1/r^2"}, {{2, 2}, "-1"}, {{3, 3}, "-sin(theta)^2"}},
       "(a^2 - 1)/a^2"},
      {"(iii)", "nu = 2*ln(a/r)\nmu = 4*ln(a/r)\nlambda = unit\nparams.a = 2\ndomain = (0.2, 5)\n",
       [a](const oracle::Coords& x) {
         const double f = a * a / (x[1] * x[1]);
         return oracle::Coords{f, -f * f, -1.0, -std::pow(std::sin(x[2]), 2)};
       },
       {{{2, 3, 2, 3}, "-sin(theta)^2"}},
       {{{2, 2}, "-1"}, {{3, 3}, "-sin(theta)^2"}},
       "2"},
  };
  std::set<int> riemann_signs, ricci_signs;
  for (const auto& pc : cases) {
    const auto m = spacetime::parse_metric(pc.metric, pc.name);
    const auto cur = spacetime::curvature(m);
    const auto d = m.sample_domain();
    std::set<std::array<int, 4>> engine_riem, listed_riem;
    for (const auto& [k, e] : cur.riemann_independent) engine_riem.insert(k);
    for (const auto& [k, e] : pc.riemann) listed_riem.insert(k);
    std::set<std::pair<int, int>> engine_ric, listed_ric;
    for (const auto& [k, e] : cur.ricci) engine_ric.insert(k);
    for (const auto& [k, e] : pc.ricci) listed_ric.insert(k);
    const bool sets_ok = engine_riem == listed_riem && engine_ric == listed_ric;
    ok = ok && sets_ok;
    std::vector<std::string> disagreements;
    for (const auto& [k, text] : pc.riemann) {
      if (!cur.riemann_independent.count(k)) continue;
      const int s = sign_between(cur.riemann_independent.at(k), sym::parse(text), d);
      if (s) riemann_signs.insert(s);
      else disagreements.push_back("R_" + std::to_string(k[0]) + std::to_string(k[1]) + std::to_string(k[2]) + std::to_string(k[3]));
    }
    for (const auto& [k, text] : pc.ricci) {
      if (!cur.ricci.count(k)) continue;
      const int s = sign_between(cur.ricci.at(k), sym::parse(text), d);
      if (s) ricci_signs.insert(s);
      else disagreements.push_back("R_" + std::to_string(k.first) + std::to_string(k.second));
    }
    const int scalar_sign = sign_between(cur.ricci_scalar, sym::parse(pc.scalar), d);
    if (scalar_sign) ricci_signs.insert(scalar_sign);
    std::string line = std::string(pc.name) + ": nonzero components " + (sets_ok ? "match the printed sets" : "DIFFER from the printed sets");
    for (const auto& x : disagreements) line += "; " + x + " value differs";
    c.details.push_back(line);
    if (!scalar_sign) {
      // Settle the disagreement with the finite-difference oracle.
      sym::Rng rng(11);
      double worst_engine = 0.0, worst_listed = 0.0;
      const Expr listed = sym::parse(pc.scalar);
      for (int i = 0; i < 20; ++i) {
        const sym::Point p = d.draw(rng);
        const oracle::Coords x{*p.get(sym::Symbol::t), *p.get(sym::Symbol::r), *p.get(sym::Symbol::theta),
                               *p.get(sym::Symbol::phi)};
        const double fd = oracle::curvature(pc.oracle_metric, x).scalar;
        const double ev = sym::eval_numeric(cur.ricci_scalar, p);
        const double pv = sym::eval_numeric(listed, p);
        worst_engine = std::max(worst_engine, std::fabs(ev - fd));
        worst_listed = std::min(std::fabs(pv - fd), std::fabs(-pv - fd)) > worst_listed
                          ? std::min(std::fabs(pv - fd), std::fabs(-pv - fd))
                          : worst_listed;
      }
      const bool oracle_sides_with_engine = worst_engine < 1e-4 && worst_listed > 1e-2;
      ok = ok && oracle_sides_with_engine;
      c.details.push_back(std::string(pc.name) + ": scalar printed " + pc.scalar + ", engine " +
                          sym::to_string(cur.ricci_scalar) + "; finite-difference oracle at 20 points agrees with the engine to " +
                          fmt(worst_engine) + " and misses the printed value (either sign) by " + fmt(worst_listed) +
                          (oracle_sides_with_engine ? "" : " INCONCLUSIVE"));
    }
  }
  const bool signs_ok = riemann_signs.size() == 1 && ricci_signs.size() == 1;
  ok = ok && signs_ok;
  c.details.push_back("convention signs: Riemann " + std::string(riemann_signs.count(1) ? "+1" : "") +
                      (riemann_signs.count(-1) ? "-1" : "") + ", Ricci and scalar " + (ricci_signs.count(1) ? "+1" : "") +
                      (ricci_signs.count(-1) ? "-1" : "") + (signs_ok ? " (one global sign each)" : " (INCONSISTENT)"));

  // de Sitter: constant scalar, |R| = 12/b^2, against the oracle.
  const double b = 2.0;
  const auto ds = spacetime::parse_metric(
      "nu = ln(1 - r^2/b^2)\nmu = -ln(1 - r^2/b^2)\nlambda = r2\nparams.b = 2\ndomain = (0, 2)\n", "de Sitter");
  const auto dc = spacetime::curvature(ds);
  const bool constant = sym::is_zero(sym::differentiate(dc.ricci_scalar, sym::Symbol::r), ds.sample_domain()).accepted_zero() &&
                        sym::is_zero(sym::differentiate(dc.ricci_scalar, sym::Symbol::theta), ds.sample_domain()).accepted_zero();
  sym::Rng rng(19);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const sym::Point p = ds.sample_domain().draw(rng);
    const oracle::Coords x{*p.get(sym::Symbol::t), *p.get(sym::Symbol::r), *p.get(sym::Symbol::theta),
                           *p.get(sym::Symbol::phi)};
    const auto fd = oracle::curvature(
        [b](const oracle::Coords& y) {
          const double f = 1 - y[1] * y[1] / (b * b);
          return oracle::Coords{f, -1 / f, -y[1] * y[1], -std::pow(y[1] * std::sin(y[2]), 2)};
        },
        x);
    worst = std::max(worst, std::fabs(std::fabs(fd.scalar) - 12 / (b * b)) / (12 / (b * b)));
    worst = std::max(worst, std::fabs(sym::eval_numeric(dc.ricci_scalar, p) - fd.scalar) / (12 / (b * b)));
  }
  const bool ds_ok = constant && worst < 1e-3;
  ok = ok && ds_ok;
  c.details.push_back("de Sitter: R = " + sym::to_string(dc.ricci_scalar) + (constant ? ", constant" : ", NOT constant") +
                      "; oracle |R| vs 12/b^2 and engine vs oracle agree to relative " + fmt(worst) + " at 20 points");

  c.verdict = ok ? Verdict::pass : Verdict::fail;
  c.summary = "Schwarzschild Ricci-flat; (i), (ii), (iii) nonzero sets match up to one global sign; metric (ii) scalar "
              "disagreement settled by the oracle; de Sitter |R| = 12/b^2";
  return c;
}

// ---------------------------------------------------------------- 7

int cli_exit(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return cli::run(args, out, err);
}

Criterion negative_controls(const std::vector<catalog::CatalogEntry>& entries) {
  Criterion c{7, "negative controls"};
  catalog::VerifyOptions quick;
  quick.drift = false;
  quick.integrals = false;
  quick.closure = false;
  bool ok = true;
  for (const char* cls : catalog::kClassIds) {
    const catalog::CatalogEntry* e = nullptr;
    for (const auto& x : entries) {
      if (x.class_id == cls) {
        e = &x;
        break;
      }
    }
    if (!e) {
      ok = false;
      c.details.push_back(std::string("class ") + cls + ": no entry");
      continue;
    }
    auto witnessed = [](const EntryReport& r, std::string& name) {
      for (const auto& g : r.generators) {
        if (!g.verified && g.witness) {
          name = g.name;
          return true;
        }
      }
      return false;
    };
    std::string which, failed_gen, failed_metric;
    const auto bad_gen = catalog::verify_entry(catalog::perturb_generator(*e, 42, &which), 42, quick);
    const auto bad_metric = catalog::verify_entry(catalog::perturb_metric(*e), 42, quick);
    const bool g_ok = !bad_gen.pass() && witnessed(bad_gen, failed_gen);
    const bool m_ok = !bad_metric.pass() && witnessed(bad_metric, failed_metric);
    ok = ok && g_ok && m_ok;
    c.details.push_back(e->label() + ": perturbed " + which + (g_ok ? " FAILs, witness on " + failed_gen : " NOT detected") +
                        "; perturbed metric" + (m_ok ? " FAILs, witness on " + failed_metric : " NOT detected"));
  }

  const auto tmp = std::filesystem::temp_directory_path() / "noether-acceptance-bad.mtr";
  std::ofstream(tmp) << "nu = ln(1 - \nmu = 0\nlambda = r2\ndomain = (1, 2)\n";
  const std::vector<std::pair<std::vector<std::string>, int>> calls = {
      {{"catalog-verify", "--class", "II", "--seed", "7"}, 0},
      {{"residual", "--metric", "schwarzschild.mtr", "--gen", "time.gen"}, 0},
      {{"residual", "--metric", "schwarzschild.mtr", "--gen", "bad.gen"}, 1},
      {{"determining", "--lambda", "r2", "--format", "latex"}, 0},
      {{"classify", "--metric", "power-law.mtr"}, 0},
      {{"frobnicate"}, 2},
      {{"residual", "--metric", "schwarzschild.mtr", "--gen", "bad.gen", "--colour"}, 2},
      {{"residual", "--metric", "missing.mtr", "--gen", "bad.gen"}, 2},
      {{"residual", "--metric", tmp.string(), "--gen", "bad.gen"}, 2},
      {{"curvature", "--metric", "schwarzschild.mtr", "--format", "yaml"}, 2},
  };
  int matched = 0;
  for (const auto& [args, want] : calls) {
    const int got = cli_exit(args);
    matched += got == want;
    if (got != want) {
      std::string line;
      for (const auto& a : args) line += a + " ";
      c.details.push_back("cli " + line + "exited " + std::to_string(got) + ", expected " + std::to_string(want));
    }
  }
  std::filesystem::remove(tmp);
  ok = ok && matched == static_cast<int>(calls.size());
  c.details.push_back("cli exit codes: " + std::to_string(matched) + "/" + std::to_string(calls.size()) + " follow 0/1/2");
  c.verdict = ok ? Verdict::pass : Verdict::fail;
  c.summary = "one perturbed generator and one perturbed metric per class fail with a witness; CLI exit codes " +
              std::to_string(matched) + "/" + std::to_string(calls.size());
  return c;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  const auto entries = catalog::load_catalog();
  std::vector<EntryReport> reports;
  for (const auto& e : entries) reports.push_back(catalog::verify_entry(e, 42));

  std::vector<Criterion> criteria;
  criteria.push_back(catalog_verification(entries, reports));
  criteria.push_back(determining_system());
  criteria.push_back(first_integrals(reports));
  criteria.push_back(conservation(reports));
  criteria.push_back(commutators(reports));
  criteria.push_back(curvature());
  criteria.push_back(negative_controls(entries));

  int pass = 0, expected = 0, fail = 0;
  for (const auto& c : criteria) {
    const char* tag = c.verdict == Verdict::pass ? "PASS" : "FAIL";
    std::cout << tag << "  " << c.id << " " << c.title << ": " << c.summary;
    if (c.verdict == Verdict::expected_fail) std::cout << " [expected: printed misprints]";
    std::cout << "\n";
    for (const auto& d : c.details) std::cout << "      " << d << "\n";
    pass += c.verdict == Verdict::pass;
    expected += c.verdict == Verdict::expected_fail;
    fail += c.verdict == Verdict::fail;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << pass << " PASS, " << expected << " FAIL on printed misprints only, " << fail << " FAIL otherwise ("
            << fmt(seconds) << " s)\n";
  return fail == 0 ? 0 : 1;
}
