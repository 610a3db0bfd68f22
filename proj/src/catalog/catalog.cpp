#include "noether/catalog/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#ifndef NOETHER_CATALOG_DIR_DEFAULT
#define NOETHER_CATALOG_DIR_DEFAULT "catalog"
#endif

namespace noether::catalog {

namespace fs = std::filesystem;

const Generator* CatalogEntry::find(const std::string& name) const {
  for (const auto& g : generators) {
    if (g.name == name) return &g;
  }
  return nullptr;
}

fs::path default_catalog_dir() {
  if (const char* env = std::getenv("NOETHER_CATALOG_DIR"); env && *env) return env;
  return NOETHER_CATALOG_DIR_DEFAULT;
}

int class_index(const std::string& class_id) {
  for (int i = 0; i < 6; ++i) {
    if (class_id == kClassIds[i]) return i;
  }
  return -1;
}

int class_dimension(const std::string& class_id) {
  static constexpr int kDims[] = {5, 6, 7, 9, 11, 17};
  const int i = class_index(class_id);
  return i < 0 ? 0 : kDims[i];
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw CatalogError("cannot open " + p.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Generator find_generator(const std::string& name, const fs::path& dir, const fs::path& root) {
  for (const fs::path& p : {dir / (name + ".gen"), root / "common" / (name + ".gen")}) {
    if (fs::exists(p)) return symmetry::load_generator(p);
  }
  throw CatalogError(dir.string() + ": no generator file for " + name);
}

// "X52 : 1/a, X42 : -1"
std::vector<std::pair<std::string, std::string>> parse_terms(const std::string& text, const std::string& where) {
  std::vector<std::pair<std::string, std::string>> out;
  if (trim(text) == "0") return out;
  std::istringstream in(text);
  for (std::string part; std::getline(in, part, ',');) {
    const auto colon = part.find(':');
    if (colon == std::string::npos) throw CatalogError(where + ": expected 'generator : coefficient'");
    out.emplace_back(trim(part.substr(0, colon)), trim(part.substr(colon + 1)));
  }
  return out;
}

}  // namespace

CatalogEntry load_entry(const fs::path& dir, const fs::path& root) {
  CatalogEntry e;
  e.dir = dir;
  e.metric = spacetime::load_metric(dir / "metric.mtr");
  const std::string text = read_file(dir / "entry.txt");
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string where = (dir / "entry.txt").string() + ":" + std::to_string(line_no);
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CatalogError(where + ": expected 'key = value'");
    const auto key = words(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw CatalogError(where + ": missing key");
    const std::string& k = key[0];
    if (k == "class") {
      e.class_id = value;
    } else if (k == "case") {
      e.case_no = std::stoi(value);
    } else if (k == "anchor") {
      e.anchor = value;
    } else if (k == "provenance") {
      e.provenance = value;
    } else if (k == "note") {
      e.notes.push_back(value);
    } else if (k == "dimension") {
      e.expected_dimension = std::stoi(value);
    } else if (k == "generators") {
      for (const auto& name : words(value)) e.generators.push_back(find_generator(name, dir, root));
    } else if (k == "integrals") {
      e.common_integrals = value == "common";
    } else if (k == "integral" && key.size() == 2) {
      e.integrals.push_back({key[1], value});
    } else if (k == "erratum" && key.size() == 2) {
      const auto semi = value.find(';');
      e.errata.push_back({key[1], trim(value.substr(0, semi)),
                          semi == std::string::npos ? "" : trim(value.substr(semi + 1))});
    } else if (k == "commutators") {
      e.commutators_complete = value == "complete";
    } else if (k == "commutator" && key.size() == 3) {
      e.commutators.push_back({key[1], key[2], parse_terms(value, where), ""});
    } else if (k == "erratum-commutator" && key.size() == 3) {
      const auto semi = value.find(';');
      ExpectedCommutator c{key[1], key[2], parse_terms(trim(value.substr(0, semi)), where), ""};
      if (semi != std::string::npos) c.reason = trim(value.substr(semi + 1));
      e.commutator_errata.push_back(std::move(c));
    } else if (k == "printed" && key.size() == 2) {
      PrintedForm pf;
      const auto at = value.find('@');
      pf.generator = symmetry::load_generator(dir / trim(value.substr(0, at)));
      pf.generator.name = key[1];
      if (at != std::string::npos) {
        std::string range = trim(value.substr(at + 1));
        double lo = 0, hi = 0;
        char open = 0, comma = 0, close = 0;
        std::istringstream rs(range);
        if (!(rs >> open >> lo >> comma >> hi >> close) || open != '(' || comma != ',' || close != ')') {
          throw CatalogError(where + ": expected '@ (lo, hi)'");
        }
        pf.domain = sym::Interval{lo, hi};
      }
      e.printed.push_back(std::move(pf));
    } else {
      throw CatalogError(where + ": unknown key '" + trim(line.substr(0, eq)) + "'");
    }
  }
  if (e.common_integrals) {
    // Table of the minimal generators, for the metric's lambda branch.
    const fs::path table = root / "common" / ("integrals." + std::string(spacetime::branch_name(e.metric.lambda)));
    std::istringstream tin(read_file(table));
    std::vector<ExpectedIntegral> common;
    for (std::string l; std::getline(tin, l);) {
      l = trim(l);
      if (l.empty() || l[0] == '#') continue;
      const auto eq = l.find('=');
      if (eq == std::string::npos) throw CatalogError(table.string() + ": expected 'generator = expression'");
      const auto key = words(l.substr(0, eq));
      const std::string value = trim(l.substr(eq + 1));
      if (key.size() == 2 && key[0] == "erratum") {
        const auto semi = value.find(';');
        e.errata.push_back({key[1], trim(value.substr(0, semi)),
                            semi == std::string::npos ? "" : trim(value.substr(semi + 1))});
      } else if (key.size() == 1) {
        common.push_back({key[0], value});
      } else {
        throw CatalogError(table.string() + ": unknown key '" + trim(l.substr(0, eq)) + "'");
      }
    }
    e.integrals.insert(e.integrals.begin(), common.begin(), common.end());
  }
  if (class_index(e.class_id) < 0) throw CatalogError(dir.string() + ": unknown class '" + e.class_id + "'");
  if (static_cast<int>(e.generators.size()) != e.expected_dimension) {
    throw CatalogError(dir.string() + ": generator count differs from the declared dimension");
  }
  for (const char* minimal : {"X0", "X1", "X2", "X3", "Y0"}) {
    if (!e.find(minimal)) throw CatalogError(dir.string() + ": missing minimal generator " + minimal);
  }
  return e;
}

std::vector<CatalogEntry> load_catalog(const fs::path& root) {
  if (!fs::is_directory(root)) throw CatalogError("catalog directory not found: " + root.string());
  std::vector<CatalogEntry> out;
  for (const char* cls : kClassIds) {
    const fs::path class_dir = root / cls;
    if (!fs::is_directory(class_dir)) continue;
    std::vector<fs::path> cases;
    for (const auto& d : fs::directory_iterator(class_dir)) {
      if (d.is_directory() && fs::exists(d.path() / "entry.txt")) cases.push_back(d.path());
    }
    for (const auto& c : cases) out.push_back(load_entry(c, root));
  }
  std::sort(out.begin(), out.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
    const int ca = class_index(a.class_id), cb = class_index(b.class_id);
    return ca != cb ? ca < cb : a.case_no < b.case_no;
  });
  return out;
}

}  // namespace noether::catalog
