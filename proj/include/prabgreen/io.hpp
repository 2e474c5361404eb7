#pragma once

// GridField files (CSV and JSON) and run configurations with the built-in
// function vocabulary for problem data.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prabgreen/errors.hpp"
#include "prabgreen/params.hpp"
#include "prabgreen/prabhakar_ops.hpp"
#include "prabgreen/problem.hpp"
#include "prabgreen/solver.hpp"

namespace prabgreen::io {

using json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

// Shortest decimal form that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  while (b < e && *b == ' ') ++b;
  while (e > b && (e[-1] == ' ' || e[-1] == '\r')) --e;
  auto r = std::from_chars(b, e, v);
  if (r.ec != std::errc() || r.ptr != e) throw ConfigError(where + ": not a number: '" + s + "'");
  return v;
}

inline const char* precision_name(Precision p) { return p == Precision::extended ? "extended" : "standard"; }

inline Precision parse_precision(const std::string& s, const std::string& where) {
  if (s == "standard") return Precision::standard;
  if (s == "extended") return Precision::extended;
  throw ConfigError(where + ": expected 'standard' or 'extended', got '" + s + "'");
}

// ---------------------------------------------------------------- meta

inline json meta_to_json(const FieldMeta& m) {
  return {{"provenance", m.provenance},
          {"version", kVersion},
          {"params", {{"alpha", m.params.alpha}, {"beta", m.params.beta}, {"gamma", m.params.gamma}, {"delta", m.params.delta}}},
          {"domain", {{"a", m.domain.a}, {"T", m.domain.T}}},
          {"ctrl",
           {{"abs_tol", m.ctrl.abs_tol},
            {"rel_tol", m.ctrl.rel_tol},
            {"max_terms", m.ctrl.max_terms},
            {"tail_run", m.ctrl.tail_run},
            {"max_images", m.ctrl.max_images},
            {"precision", precision_name(m.ctrl.precision)}}},
          {"quadrature",
           {{"panels", m.quadrature.panels},
            {"grading", m.quadrature.grading},
            {"interp_order", m.quadrature.interp_order},
            {"gauss_points", m.quadrature.gauss_points}}}};
}

// ---------------------------------------------------------------- config readers

namespace detail {

inline const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline double get_real(const json& j, const char* key, double def, const std::string& path) {
  const json* v = find(j, key);
  if (!v) return def;
  if (!v->is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v->get<double>();
}

inline double req_real(const json& j, const char* key, const std::string& path) {
  if (!find(j, key)) throw ConfigError(path + "." + key + ": missing");
  return get_real(j, key, 0.0, path);
}

inline int get_int(const json& j, const char* key, int def, const std::string& path) {
  const json* v = find(j, key);
  if (!v) return def;
  if (!v->is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
  return v->get<int>();
}

inline std::string get_string(const json& j, const char* key, const std::string& def, const std::string& path) {
  const json* v = find(j, key);
  if (!v) return def;
  if (!v->is_string()) throw ConfigError(path + "." + key + ": expected a string");
  return v->get<std::string>();
}

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
}

// Rethrows a library validation error as a config error at path.
template <class F>
void validated(const std::string& path, F&& f) {
  try {
    f();
  } catch (const DomainError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace detail

inline FieldMeta meta_from_json(const json& j) {
  using namespace detail;
  require_object(j, "meta");
  FieldMeta m;
  m.provenance = get_string(j, "provenance", "", "meta");
  if (const json* p = find(j, "params")) {
    m.params = {get_real(*p, "alpha", m.params.alpha, "meta.params"), get_real(*p, "beta", m.params.beta, "meta.params"),
                get_real(*p, "gamma", m.params.gamma, "meta.params"), get_real(*p, "delta", m.params.delta, "meta.params")};
  }
  if (const json* d = find(j, "domain"))
    m.domain = {get_real(*d, "a", m.domain.a, "meta.domain"), get_real(*d, "T", m.domain.T, "meta.domain")};
  if (const json* c = find(j, "ctrl")) {
    m.ctrl.abs_tol = get_real(*c, "abs_tol", m.ctrl.abs_tol, "meta.ctrl");
    m.ctrl.rel_tol = get_real(*c, "rel_tol", m.ctrl.rel_tol, "meta.ctrl");
    m.ctrl.max_terms = get_int(*c, "max_terms", m.ctrl.max_terms, "meta.ctrl");
    m.ctrl.tail_run = get_int(*c, "tail_run", m.ctrl.tail_run, "meta.ctrl");
    m.ctrl.max_images = get_int(*c, "max_images", m.ctrl.max_images, "meta.ctrl");
    m.ctrl.precision = parse_precision(get_string(*c, "precision", "standard", "meta.ctrl"), "meta.ctrl.precision");
  }
  if (const json* q = find(j, "quadrature")) {
    m.quadrature.panels = get_int(*q, "panels", m.quadrature.panels, "meta.quadrature");
    m.quadrature.grading = get_real(*q, "grading", m.quadrature.grading, "meta.quadrature");
    m.quadrature.interp_order = get_int(*q, "interp_order", m.quadrature.interp_order, "meta.quadrature");
    m.quadrature.gauss_points = get_int(*q, "gauss_points", m.quadrature.gauss_points, "meta.quadrature");
  }
  return m;
}

// ---------------------------------------------------------------- GridField files

// CSV: '#' header lines carrying the meta object as JSON, then the columns
// t,x,value,trunc_bound with one row per node, row-major in t.
inline void write_csv(const GridField& g, std::ostream& os) {
  g.validate();
  os << "# prabgreen grid field\n";
  os << "# meta: " << meta_to_json(g.meta).dump() << "\n";
  os << "t,x,value,trunc_bound\n";
  for (size_t i = 0; i < g.t_nodes.size(); ++i)
    for (size_t j = 0; j < g.x_nodes.size(); ++j)
      os << format_double(g.t_nodes[i]) << ',' << format_double(g.x_nodes[j]) << ',' << format_double(g.at(i, j))
         << ',' << format_double(g.bound(i, j)) << '\n';
}

namespace detail {

// Node lists from row-major (t, x) pairs.
inline void nodes_from_rows(const std::vector<std::array<double, 4>>& rows, GridField& g, const std::string& where) {
  g.t_nodes.clear();
  g.x_nodes.clear();
  for (const auto& r : rows) {
    if (g.t_nodes.empty() || g.t_nodes.back() != r[0]) g.t_nodes.push_back(r[0]);
    if (g.t_nodes.size() == 1) g.x_nodes.push_back(r[1]);
  }
  const size_t nx = g.x_nodes.size();
  if (rows.size() != g.t_nodes.size() * nx) throw ConfigError(where + ": rows do not form a rectangular grid");
  g.values.resize(rows.size());
  g.bounds.resize(rows.size());
  bool any_bound = false;
  for (size_t k = 0; k < rows.size(); ++k) {
    if (rows[k][0] != g.t_nodes[k / nx] || rows[k][1] != g.x_nodes[k % nx])
      throw ConfigError(where + ": row " + std::to_string(k + 1) + " out of grid order");
    g.values[k] = rows[k][2];
    g.bounds[k] = rows[k][3];
    any_bound = any_bound || rows[k][3] != 0.0;
  }
  if (!any_bound) g.bounds.clear();
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

}  // namespace detail

inline GridField read_csv(std::istream& is, const std::string& where = "csv") {
  GridField g;
  std::string line;
  bool header = false;
  std::vector<std::array<double, 4>> rows;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string key = "# meta: ";
      if (line.compare(0, key.size(), key) == 0) {
        try {
          g.meta = meta_from_json(json::parse(line.substr(key.size())));
        } catch (const json::exception& e) {
          throw ConfigError(where + ": malformed meta line: " + e.what());
        }
      }
      continue;
    }
    if (!header) {
      if (line != "t,x,value,trunc_bound") throw ConfigError(where + ": expected header t,x,value,trunc_bound");
      header = true;
      continue;
    }
    std::array<double, 4> r{};
    std::stringstream ss(line);
    std::string cell;
    int k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k >= 4) throw ConfigError(where + ":" + std::to_string(lineno) + ": too many columns");
      r[k] = parse_double(cell, where + ":" + std::to_string(lineno));
      ++k;
    }
    if (k != 4) throw ConfigError(where + ":" + std::to_string(lineno) + ": expected 4 columns");
    rows.push_back(r);
  }
  if (!header) throw ConfigError(where + ": missing header");
  detail::nodes_from_rows(rows, g, where);
  return g;
}

inline json to_json(const GridField& g) {
  g.validate();
  json rows = json::array();
  for (size_t i = 0; i < g.t_nodes.size(); ++i)
    for (size_t j = 0; j < g.x_nodes.size(); ++j)
      rows.push_back({g.t_nodes[i], g.x_nodes[j], g.at(i, j), g.bound(i, j)});
  return {{"meta", meta_to_json(g.meta)}, {"columns", {"t", "x", "value", "trunc_bound"}}, {"rows", rows}};
}

inline GridField grid_from_json(const json& j, const std::string& where = "json") {
  GridField g;
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) throw ConfigError(where + ": missing rows array");
  if (j.contains("meta")) g.meta = meta_from_json(j["meta"]);
  std::vector<std::array<double, 4>> rows;
  for (const auto& r : j["rows"]) {
    if (!r.is_array() || r.size() != 4) throw ConfigError(where + ": each row must hold 4 numbers");
    std::array<double, 4> v{};
    for (int k = 0; k < 4; ++k) {
      if (!r[k].is_number()) throw ConfigError(where + ": non-numeric row entry");
      v[k] = r[k].get<double>();
    }
    rows.push_back(v);
  }
  detail::nodes_from_rows(rows, g, where);
  return g;
}

inline void write_field(const GridField& g, const std::filesystem::path& path, const std::string& format) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("output.path: cannot open " + path.string());
  if (format == "csv")
    write_csv(g, os);
  else if (format == "json")
    os << to_json(g).dump(1) << "\n";
  else
    throw ConfigError("output.format: expected 'csv' or 'json'");
  if (!os) throw ConfigError("output.path: write failed for " + path.string());
}

inline GridField read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError(path.string() + ": cannot open");
  if (path.extension() == ".json") {
    try {
      return grid_from_json(json::parse(is), path.string());
    } catch (const json::exception& e) {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
  return read_csv(is, path.string());
}

// ---------------------------------------------------------------- function vocabulary

namespace detail {

// Two-column numeric table (x, value); '#' lines and a non-numeric first
// line are skipped.
inline void read_table(const std::filesystem::path& file, std::vector<double>& xs, std::vector<double>& vs,
                       const std::string& path) {
  std::ifstream is(file);
  if (!is) throw ConfigError(path + ".path: cannot open " + file.string());
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError(path + ": table line without a comma: '" + line + "'");
    try {
      const double x = parse_double(line.substr(0, comma), path), v = parse_double(line.substr(comma + 1), path);
      xs.push_back(x);
      vs.push_back(v);
    } catch (const ConfigError&) {
      if (!first) throw;
    }
    first = false;
  }
  if (xs.size() < 2) throw ConfigError(path + ": table needs at least two rows");
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw ConfigError(path + ": table abscissae must increase");
}

inline std::string type_of(const json& d, const std::string& path) {
  if (d.is_string()) return d.get<std::string>();
  require_object(d, path);
  const json* t = find(d, "type");
  if (!t || !t->is_string()) throw ConfigError(path + ".type: missing function type");
  return t->get<std::string>();
}

inline const json& terms_of(const json& d, const std::string& path) {
  const json* t = find(d, "terms");
  if (!t || !t->is_array() || t->empty()) throw ConfigError(path + ".terms: expected a non-empty array");
  return *t;
}

}  // namespace detail

struct Vocabulary {
  FracParams p;
  Domain dom;
  std::filesystem::path base;  // directory against which table paths resolve
};

// zero | power(sigma): t^{sigma-1} | ml_kernel(sigma, weight = gamma):
// t^{sigma-1} E^{weight}_{alpha,sigma}(delta t^alpha) | table(path, sigma0) |
// sum(terms); every non-zero form takes an optional coef.
inline TimeFunction time_function(const json& d, const Vocabulary& v, const std::string& path) {
  using namespace detail;
  const std::string type = type_of(d, path);
  if (type == "zero") return TimeFunction::zero();
  const double coef = d.is_object() ? get_real(d, "coef", 1.0, path) : 1.0;
  if (type == "power" || type == "ml_kernel") {
    const double sigma = req_real(d, "sigma", path);
    if (!(sigma > 0)) throw ConfigError(path + ".sigma: must be positive");
    MlPower m = MlPower::power(sigma, v.p.alpha, v.p.delta);
    m.scale *= coef;
    if (type == "ml_kernel") {
      m.weight = get_real(d, "weight", v.p.gamma, path);
      m.scale = coef;
    }
    return m.as_time_function();
  }
  if (type == "table") {
    std::vector<double> t, f;
    read_table(v.base / get_string(d, "path", "", path), t, f, path);
    for (double& x : f) x *= coef;
    TimeFunction out;
    validated(path, [&] { out = TimeFunction::sampled(t, f, get_real(d, "sigma0", 0.0, path)); });
    return out;
  }
  if (type == "sum") {
    const json& terms = terms_of(d, path);
    std::vector<TimeFunction> parts;
    double s0 = 0.0;
    for (size_t k = 0; k < terms.size(); ++k) {
      parts.push_back(time_function(terms[k], v, path + ".terms[" + std::to_string(k) + "]"));
      if (!parts.back().is_zero()) s0 = std::min(s0, parts.back().sigma0());
    }
    return TimeFunction::callable(
        [parts, coef](double t) {
          double s = 0.0;
          for (const auto& f : parts)
            if (!f.is_zero()) s += f(t);
          return coef * s;
        },
        s0);
  }
  throw ConfigError(path + ".type: unknown time function '" + type + "'");
}

// zero | constant(value) | sine(m): sin(m pi x / a) | table(path), linear
// interpolation | sum(terms); optional coef.
inline SpaceFunction space_function(const json& d, const Vocabulary& v, const std::string& path) {
  using namespace detail;
  const std::string type = type_of(d, path);
  if (type == "zero") return {};
  const double coef = d.is_object() ? get_real(d, "coef", 1.0, path) : 1.0;
  if (type == "constant") {
    const double c = coef * req_real(d, "value", path);
    return {[c](double) { return c; }};
  }
  if (type == "sine") {
    const int m = get_int(d, "m", 1, path);
    if (m < 1) throw ConfigError(path + ".m: must be at least 1");
    const double k = m * 3.14159265358979323846 / v.dom.a;
    return {[k, coef](double x) { return coef * std::sin(k * x); }};
  }
  if (type == "table") {
    std::vector<double> xs, fs;
    read_table(v.base / get_string(d, "path", "", path), xs, fs, path);
    if (xs.front() > 0 || xs.back() < v.dom.a) throw ConfigError(path + ": table must cover [0, a]");
    return {[xs, fs, coef](double x) {
      const size_t i = std::min<size_t>(std::max<size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin(), 1),
                                        xs.size() - 1);
      const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return coef * ((1 - w) * fs[i - 1] + w * fs[i]);
    }};
  }
  if (type == "sum") {
    const json& terms = terms_of(d, path);
    std::vector<SpaceFunction> parts;
    for (size_t k = 0; k < terms.size(); ++k)
      parts.push_back(space_function(terms[k], v, path + ".terms[" + std::to_string(k) + "]"));
    return {[parts, coef](double x) {
      double s = 0.0;
      for (const auto& f : parts) s += f(x);
      return coef * s;
    }};
  }
  throw ConfigError(path + ".type: unknown space function '" + type + "'");
}

// zero | product(time, space) | sum(terms).
inline SpaceTimeFunction space_time_function(const json& d, const Vocabulary& v, const std::string& path) {
  using namespace detail;
  const std::string type = type_of(d, path);
  if (type == "zero") return {};
  if (type == "product") {
    const json* tj = find(d, "time");
    const json* sj = find(d, "space");
    if (!tj || !sj) throw ConfigError(path + ": product needs 'time' and 'space'");
    TimeFunction tf = time_function(*tj, v, path + ".time");
    SpaceFunction sf = space_function(*sj, v, path + ".space");
    const double coef = get_real(d, "coef", 1.0, path);
    if (tf.is_zero() || sf.is_zero()) return {};
    return {[tf, sf, coef](double t, double x) { return coef * tf(t) * sf(x); }, tf.sigma0()};
  }
  if (type == "sum") {
    const json& terms = terms_of(d, path);
    std::vector<SpaceTimeFunction> parts;
    double s0 = 0.0;
    for (size_t k = 0; k < terms.size(); ++k) {
      parts.push_back(space_time_function(terms[k], v, path + ".terms[" + std::to_string(k) + "]"));
      if (!parts.back().is_zero()) s0 = std::min(s0, parts.back().sigma0);
    }
    return {[parts](double t, double x) {
              double s = 0.0;
              for (const auto& f : parts) s += f(t, x);
              return s;
            },
            s0};
  }
  throw ConfigError(path + ".type: unknown source function '" + type + "'");
}

// ---------------------------------------------------------------- run configuration

struct OutputSpec {
  std::string path;
  std::string format = "csv";
};

struct RunConfig {
  FracParams params;
  Domain domain;
  SeriesControl ctrl;
  QuadratureSpec quadrature;
  ProblemData problem;
  OutputSpec output;
  std::vector<double> t_nodes, x_nodes;  // empty when the config gives no grid
  std::uint64_t seed = 0;
  std::string verify_suite = "all";
  std::optional<double> verify_tolerance;
};

namespace detail {

// A node list given explicitly or as {"from", "to", "n"} (uniform, inclusive).
inline std::vector<double> node_list(const json& j, const std::string& path) {
  std::vector<double> out;
  if (j.is_array()) {
    for (size_t k = 0; k < j.size(); ++k) {
      if (!j[k].is_number()) throw ConfigError(path + "[" + std::to_string(k) + "]: expected a number");
      out.push_back(j[k].get<double>());
    }
    return out;
  }
  require_object(j, path);
  const double lo = req_real(j, "from", path), hi = req_real(j, "to", path);
  const int n = get_int(j, "n", 0, path);
  if (n < 1) throw ConfigError(path + ".n: must be at least 1");
  if (n == 1) return {hi};
  for (int k = 0; k < n; ++k) out.push_back(lo + (hi - lo) * k / (n - 1));
  out.back() = hi;
  return out;
}

}  // namespace detail

inline RunConfig parse_config(const json& j, const std::filesystem::path& base = ".") {
  using namespace detail;
  require_object(j, "config");
  static const char* known[] = {"params", "domain", "ctrl", "quadrature", "problem", "grid", "output", "seed", "verify"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return it.key() == k; }) == std::end(known))
      throw ConfigError("config." + it.key() + ": unknown key");
  RunConfig c;
  if (const json* p = find(j, "params")) {
    require_object(*p, "params");
    c.params = {get_real(*p, "alpha", c.params.alpha, "params"), get_real(*p, "beta", c.params.beta, "params"),
                get_real(*p, "gamma", c.params.gamma, "params"), get_real(*p, "delta", c.params.delta, "params")};
  }
  validated("params", [&] { c.params.validate(); });
  if (const json* d = find(j, "domain")) {
    require_object(*d, "domain");
    c.domain = {get_real(*d, "a", c.domain.a, "domain"), get_real(*d, "T", c.domain.T, "domain")};
  }
  validated("domain", [&] { c.domain.validate(); });
  if (const json* s = find(j, "ctrl")) {
    require_object(*s, "ctrl");
    c.ctrl.abs_tol = get_real(*s, "abs_tol", c.ctrl.abs_tol, "ctrl");
    c.ctrl.rel_tol = get_real(*s, "rel_tol", c.ctrl.rel_tol, "ctrl");
    c.ctrl.max_terms = get_int(*s, "max_terms", c.ctrl.max_terms, "ctrl");
    c.ctrl.tail_run = get_int(*s, "tail_run", c.ctrl.tail_run, "ctrl");
    c.ctrl.max_images = get_int(*s, "max_images", c.ctrl.max_images, "ctrl");
    c.ctrl.precision = parse_precision(get_string(*s, "precision", "standard", "ctrl"), "ctrl.precision");
  }
  validated("ctrl", [&] { c.ctrl.validate(); });
  if (const json* q = find(j, "quadrature")) {
    require_object(*q, "quadrature");
    c.quadrature.panels = get_int(*q, "panels", c.quadrature.panels, "quadrature");
    c.quadrature.grading = get_real(*q, "grading", c.quadrature.grading, "quadrature");
    c.quadrature.interp_order = get_int(*q, "interp_order", c.quadrature.interp_order, "quadrature");
    c.quadrature.gauss_points = get_int(*q, "gauss_points", c.quadrature.gauss_points, "quadrature");
  }
  validated("quadrature", [&] { c.quadrature.validate(); });

  c.problem.p = c.params;
  c.problem.dom = c.domain;
  if (const json* pr = find(j, "problem")) {
    require_object(*pr, "problem");
    const Vocabulary v{c.params, c.domain, base};
    if (const json* x = find(*pr, "phi0")) c.problem.phi0 = time_function(*x, v, "problem.phi0");
    if (const json* x = find(*pr, "phi1")) c.problem.phi1 = time_function(*x, v, "problem.phi1");
    if (const json* x = find(*pr, "tau")) c.problem.tau = space_function(*x, v, "problem.tau");
    if (const json* x = find(*pr, "f")) c.problem.f = space_time_function(*x, v, "problem.f");
  }
  validated("problem", [&] { c.problem.validate(); });

  if (const json* g = find(j, "grid")) {
    require_object(*g, "grid");
    if (const json* t = find(*g, "t")) c.t_nodes = node_list(*t, "grid.t");
    if (const json* x = find(*g, "x")) c.x_nodes = node_list(*x, "grid.x");
    for (double t : c.t_nodes)
      if (!(t > 0 && t <= c.domain.T)) throw ConfigError("grid.t: nodes must lie in (0, T]");
    for (double x : c.x_nodes)
      if (!(x >= 0 && x <= c.domain.a)) throw ConfigError("grid.x: nodes must lie in [0, a]");
  }
  if (const json* o = find(j, "output")) {
    require_object(*o, "output");
    c.output.path = get_string(*o, "path", "", "output");
    c.output.format = get_string(*o, "format", "csv", "output");
    if (c.output.format != "csv" && c.output.format != "json")
      throw ConfigError("output.format: expected 'csv' or 'json'");
  }
  if (const json* s = find(j, "seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0))
      throw ConfigError("seed: expected a non-negative integer");
    c.seed = s->get<std::uint64_t>();
  }
  if (const json* v = find(j, "verify")) {
    require_object(*v, "verify");
    c.verify_suite = get_string(*v, "suite", c.verify_suite, "verify");
    if (find(*v, "tolerance")) {
      const double tol = get_real(*v, "tolerance", 0.0, "verify");
      if (!(tol >= 0)) throw ConfigError("verify.tolerance: must be non-negative");
      c.verify_tolerance = tol;
    }
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("config: cannot open " + file.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("config: " + file.string() + ": " + e.what());
  }
  return parse_config(j, file.has_parent_path() ? file.parent_path() : std::filesystem::path("."));
}

// Uniform grid t_k = T k / nt (k = 1..nt) and x_j = a j / (nx - 1).
inline void uniform_grid(const Domain& dom, int nt, int nx, std::vector<double>& t, std::vector<double>& x) {
  if (nt < 1 || nx < 1) throw ConfigError("grid: counts must be at least 1");
  t.clear();
  x.clear();
  for (int k = 1; k <= nt; ++k) t.push_back(dom.T * k / nt);
  if (nx == 1) {
    x.push_back(0.5 * dom.a);
    return;
  }
  for (int j = 0; j < nx; ++j) x.push_back(dom.a * j / (nx - 1));
}

}  // namespace prabgreen::io
