#include "noether/spacetime/metric.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "noether/symbolic/calculus.hpp"
#include "noether/symbolic/evaluate.hpp"
#include "noether/symbolic/parser.hpp"
#include "noether/symbolic/simplify.hpp"

namespace noether::spacetime {

using sym::UnknownName;

std::string_view branch_name(LambdaBranch b) { return b == LambdaBranch::unit ? "unit" : "r2"; }

Expr arbitrary_profile(UnknownName which) { return sym::unknown(which, {Symbol::r}); }

Expr Metric::exp_nu() const { return sym::simplify(sym::exp(nu)); }
Expr Metric::exp_mu() const { return sym::simplify(sym::exp(mu)); }
Expr Metric::exp_lambda() const {
  return lambda == LambdaBranch::unit ? Expr(1L) : sym::pow(Expr(Symbol::r), 2L);
}

std::array<Expr, 4> Metric::diagonal() const {
  const Expr el = exp_lambda();
  return {exp_nu(), sym::simplify(-exp_mu()), sym::simplify(-el),
          sym::simplify(-el * sym::pow(sym::sin(Expr(Symbol::theta)), 2L))};
}

bool Metric::has_arbitrary_profile() const { return nu.contains_unknowns() || mu.contains_unknowns(); }

Metric Metric::concrete() const {
  Metric out = *this;
  if (standin_nu) out.nu = sym::substitute_unknown(out.nu, UnknownName::nu, *standin_nu);
  if (standin_mu) out.mu = sym::substitute_unknown(out.mu, UnknownName::mu, *standin_mu);
  return out;
}

sym::SampleDomain Metric::sample_domain() const {
  sym::SampleDomain d = sym::SampleDomain::standard();
  double lo = domain.lo;
  double hi = std::isfinite(domain.hi) ? domain.hi : lo + 10.0;
  const double margin = 0.05 * (hi - lo);
  d.with_range(Symbol::r, {lo + margin, hi - margin});
  for (const auto& [s, v] : params) d.with_fixed(s, v);
  return d;
}

sym::Point Metric::parameter_point() const {
  sym::Point p;
  const auto d = sym::SampleDomain::standard();
  for (std::size_t i = 0; i < sym::kSymbolCount; ++i) {
    if (d.fixed[i]) p.set(static_cast<Symbol>(i), *d.fixed[i]);
  }
  for (const auto& [s, v] : params) p.set(s, v);
  return p;
}

Expr lagrangian(const Metric& m) {
  const auto g = m.diagonal();
  Expr sum = Expr(0L);
  for (std::size_t i = 0; i < 4; ++i) sum = sum + g[i] * sym::pow(Expr(sym::kVelocities[i]), 2L);
  return sym::simplify(sum);
}

Metric flat_metric() {
  Metric m;
  m.name = "flat";
  m.nu = Expr(0L);
  m.mu = Expr(0L);
  m.domain = {0.0, 10.0};
  return m;
}

Metric symbolic_family(LambdaBranch branch) {
  Metric m;
  m.name = std::string("generic-") + std::string(branch_name(branch));
  m.nu = arbitrary_profile(UnknownName::nu);
  m.mu = arbitrary_profile(UnknownName::mu);
  m.lambda = branch;
  return m;
}

MetricParseError::MetricParseError(const std::string& message, std::size_t line)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_real(const std::string& text, std::size_t line) {
  const std::string v = trim(text);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    // Allow exact DSL constants such as 3/2.
    try {
      const Expr e = sym::parse(v);
      return sym::eval_numeric(e, sym::Point{});
    } catch (const std::exception&) {
      throw MetricParseError("expected a real number, got '" + v + "'", line);
    }
  }
}

Expr parse_expr(const std::string& text, std::size_t line) {
  try {
    return sym::parse(text);
  } catch (const sym::ParseError& e) {
    throw MetricParseError(e.what(), line);
  }
}

void require_profile_only_in_r(const Expr& e, const std::string& key, std::size_t line) {
  for (Symbol s : sym::free_symbols(e)) {
    if (s == Symbol::r || sym::is_parameter(s)) continue;
    throw MetricParseError(key + " may depend only on r and parameters, found '" +
                               std::string(sym::symbol_name(s)) + "'",
                           line);
  }
  for (const auto& f : sym::unknown_functions(e)) {
    if ((f.name == UnknownName::nu || f.name == UnknownName::mu) && f.args == 0b00100) continue;
    throw MetricParseError(key + " may only use the unknown profiles nu(r), mu(r)", line);
  }
}

}  // namespace

Metric parse_metric(std::string_view text, const std::string& fallback_name) {
  Metric m;
  m.name = fallback_name;
  bool have_nu = false, have_mu = false, have_lambda = false, have_domain = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw MetricParseError("expected 'key = value'", line_no);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (value.empty()) throw MetricParseError("missing value for '" + key + "'", line_no);

    if (key == "name") {
      m.name = value;
    } else if (key == "nu" || key == "mu") {
      const UnknownName which = key == "nu" ? UnknownName::nu : UnknownName::mu;
      Expr e = value == "arbitrary" ? arbitrary_profile(which) : parse_expr(value, line_no);
      require_profile_only_in_r(e, key, line_no);
      (key == "nu" ? m.nu : m.mu) = e;
      (key == "nu" ? have_nu : have_mu) = true;
    } else if (key == "standin.nu" || key == "standin.mu") {
      Expr e = parse_expr(value, line_no);
      require_profile_only_in_r(e, key, line_no);
      if (e.contains_unknowns()) throw MetricParseError(key + " must be explicit", line_no);
      (key == "standin.nu" ? m.standin_nu : m.standin_mu) = e;
    } else if (key == "lambda") {
      if (value == "r2") {
        m.lambda = LambdaBranch::radius_squared;
      } else if (value == "unit") {
        m.lambda = LambdaBranch::unit;
      } else {
        throw MetricParseError("lambda must be 'r2' or 'unit'", line_no);
      }
      have_lambda = true;
    } else if (key.rfind("params.", 0) == 0) {
      const std::string pname = key.substr(7);
      auto s = sym::symbol_from_name(pname);
      if (!s || !sym::is_parameter(*s)) {
        throw MetricParseError("unknown parameter '" + pname + "' (allowed: alpha, beta, a, b, p)", line_no);
      }
      m.params[*s] = parse_real(value, line_no);
    } else if (key == "domain") {
      if (value.front() != '(' || value.back() != ')') {
        throw MetricParseError("domain must be written (lo, hi)", line_no);
      }
      const std::string inner = value.substr(1, value.size() - 2);
      const auto comma = inner.find(',');
      if (comma == std::string::npos) throw MetricParseError("domain must be written (lo, hi)", line_no);
      m.domain.lo = parse_real(inner.substr(0, comma), line_no);
      m.domain.hi = parse_real(inner.substr(comma + 1), line_no);
      if (!(m.domain.lo < m.domain.hi) || !std::isfinite(m.domain.lo)) {
        throw MetricParseError("domain needs finite lo < hi", line_no);
      }
      have_domain = true;
    } else {
      throw MetricParseError("unknown key '" + key + "'", line_no);
    }
  }
  const std::size_t end = line_no + 1;
  if (!have_nu) throw MetricParseError("missing key 'nu'", end);
  if (!have_mu) throw MetricParseError("missing key 'mu'", end);
  if (!have_lambda) throw MetricParseError("missing key 'lambda'", end);
  if (!have_domain) throw MetricParseError("missing key 'domain'", end);
  return m;
}

Metric load_metric(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open metric file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_metric(buffer.str(), path.stem().string());
  } catch (const MetricParseError& e) {
    throw MetricParseError(path.string() + ": " + e.what(), e.line());
  }
}

std::string format_metric(const Metric& m) {
  std::ostringstream os;
  auto profile = [](const Expr& e) {
    return e.kind() == sym::Kind::unknown && e.node().unknown.order() == 0 ? std::string("arbitrary")
                                                                           : sym::to_string(e);
  };
  os << "name = " << m.name << "\n";
  os << "nu = " << profile(m.nu) << "\n";
  os << "mu = " << profile(m.mu) << "\n";
  os << "lambda = " << branch_name(m.lambda) << "\n";
  for (const auto& [s, v] : m.params) os << "params." << sym::symbol_name(s) << " = " << v << "\n";
  os << "domain = (" << m.domain.lo << ", ";
  if (std::isfinite(m.domain.hi)) {
    os << m.domain.hi;
  } else {
    os << "inf";
  }
  os << ")\n";
  if (m.standin_nu) os << "standin.nu = " << sym::to_string(*m.standin_nu) << "\n";
  if (m.standin_mu) os << "standin.mu = " << sym::to_string(*m.standin_mu) << "\n";
  return os.str();
}

MetricCheck check_metric(const Metric& m, std::uint64_t seed) {
  MetricCheck out;
  const Metric c = m.concrete();
  const Expr gtt = c.exp_nu();
  const Expr grr = c.exp_mu();
  const auto domain = c.sample_domain();
  sym::Rng rng(seed);
  sym::RandomRealizations realizations(seed);
  const auto resolver = realizations.resolver();
  for (int i = 0; i < sym::kZeroSamples; ++i) {
    const sym::Point p = domain.draw(rng);
    try {
      const double a = sym::eval_numeric(gtt, p, resolver);
      const double b = sym::eval_numeric(grr, p, resolver);
      ++out.samples;
      if (!(a > 0.0) || !(b > 0.0)) {
        out.ok = false;
        std::ostringstream os;
        os << "signature violated at {" << p.to_string() << "}: e^nu = " << a << ", e^mu = " << b;
        out.message = os.str();
        return out;
      }
    } catch (const sym::EvalError& e) {
      out.ok = false;
      out.message = std::string("metric singular inside its domain: ") + e.what();
      return out;
    }
  }
  out.message = "e^nu > 0 and e^mu > 0 at " + std::to_string(out.samples) + " points";
  return out;
}

}  // namespace noether::spacetime
