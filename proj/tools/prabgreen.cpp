// prabgreen: kernel evaluation, grid solves and the identity suite.
//
// Exit codes: 0 success, 1 identity failure, 2 configuration error,
// 3 numeric failure.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prabgreen/io.hpp"
#include "prabgreen/kernels.hpp"
#include "prabgreen/solver.hpp"
#include "prabgreen/verify.hpp"

using namespace prabgreen;
using json = nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kIdentityFailure = 1, kConfigError = 2, kNumericFailure = 3 };

io::RunConfig load(const std::string& path) {
  io::RunConfig c = path.empty() ? io::parse_config(json::object()) : io::load_config(path);
  if (const char* env = std::getenv("PRABGREEN_PRECISION")) {
    c.ctrl.precision = io::parse_precision(env, "PRABGREEN_PRECISION");
    c.problem.p = c.params;
  }
  return c;
}

// Output format: explicit flag, then the configuration, then the extension.
std::string pick_format(const std::string& flag, const io::RunConfig& c, const std::string& path) {
  if (!flag.empty()) return flag;
  if (!c.output.path.empty() || c.output.format != "csv") return c.output.format;
  if (path.size() > 5 && path.substr(path.size() - 5) == ".json") return "json";
  return "csv";
}

// "16x16" -> (16, 16).
std::pair<int, int> parse_grid(const std::string& s) {
  const auto x = s.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    size_t used = 0;
    const int nt = std::stoi(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(s);
    const int nx = std::stoi(s.substr(x + 1), &used);
    if (used != s.size() - x - 1 || nt < 1 || nx < 1) throw std::invalid_argument(s);
    return {nt, nx};
  } catch (const std::exception&) {
    throw ConfigError("--grid: expected NxM with positive integers, got '" + s + "'");
  }
}

struct EvalOptions {
  std::string subject = "omega";
  double t = 0.5, x = 0.0, x2 = 0.0, eta = 0.0, s = 0.0;
  int grid = 0;
};

struct Rows {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Rows run_eval(const EvalOptions& o, const io::RunConfig& c) {
  const FracParams& p = c.params;
  Rows out;
  auto check = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  if (o.subject == "omega") {
    check(o.grid == 0, "--grid applies to green and green_s");
    check(o.t > 0, "omega: --t must be positive");
    check(o.x >= 0, "omega: --x must be non-negative");
    out.columns = {"t", "x", "value", "trunc_bound"};
    KernelValue kv = omega_value(o.t, o.x, p, c.ctrl);
    out.rows.push_back({o.t, o.x, kv.value, kv.bound});
  } else if (o.subject == "w") {
    check(o.grid == 0, "--grid applies to green and green_s");
    check(o.t > 0, "w: --t must be positive");
    check(o.x >= 0 && o.x2 >= 0, "w: --x and --x2 must be non-negative");
    out.columns = {"t", "x1", "x2", "value", "trunc_bound"};
    KernelValue kv = w_kernel_value(o.t, o.x, o.x2, p, c.ctrl);
    out.rows.push_back({o.t, o.x, o.x2, kv.value, kv.bound});
  } else {
    const bool is_s = o.subject == "green_s";
    check(o.subject == "green" || is_s, "--subject: expected omega, w, green or green_s");
    check(o.eta >= 0 && o.eta < o.t, "green: requires 0 <= eta < t");
    check(o.t - o.eta >= GreenFunction::kMinSeparation, "green: t - eta below 1e-8");
    check(o.t <= c.domain.T * (1 + 1e-12), "green: t beyond T");
    const double a = c.domain.a;
    std::vector<double> xs{o.x}, ss{o.s};
    if (o.grid > 0) {
      check(o.grid >= 2, "--grid: need at least 2 points per side");
      xs.clear();
      for (int i = 0; i < o.grid; ++i) xs.push_back(a * i / (o.grid - 1));
      ss = xs;
    }
    for (double v : xs) check(v >= 0 && v <= a, "green: x must lie in [0, a]");
    for (double v : ss) check(v >= 0 && v <= a, "green: s must lie in [0, a]");
    out.columns = {"t", "x", "eta", "s", "value", "trunc_bound"};
    for (double x : xs)
      for (double s : ss) {
        try {
          KernelValue kv;
          if (is_s) {
            GreenSValue g = green_s_value(o.t, x, o.eta, s, p, c.domain, c.ctrl);
            kv = {g.value, g.bound};
          } else {
            kv = green_value(o.t, x, o.eta, s, p, c.domain, c.ctrl);
          }
          out.rows.push_back({o.t, x, o.eta, s, kv.value, kv.bound});
        } catch (const Error& e) {
          std::ostringstream m;
          m << "at (t=" << o.t << ", x=" << x << ", eta=" << o.eta << ", s=" << s << "): " << e.what();
          throw NonConvergence(m.str());
        }
      }
  }
  return out;
}

void write_rows(const Rows& r, const std::string& subject, const io::RunConfig& c, const std::string& format,
                std::ostream& os) {
  if (format == "json") {
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(row);
    json j{{"subject", subject},
           {"version", io::kVersion},
           {"meta", io::meta_to_json({c.params, c.domain, c.ctrl, c.quadrature, "eval " + subject})},
           {"columns", r.columns},
           {"rows", rows}};
    os << j.dump(2) << "\n";
    return;
  }
  for (size_t k = 0; k < r.columns.size(); ++k) os << (k ? "," : "") << r.columns[k];
  os << "\n";
  for (const auto& row : r.rows) {
    for (size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << io::format_double(row[k]);
    os << "\n";
  }
}

int cmd_eval(const EvalOptions& o, const std::string& config, const std::string& out, const std::string& format_flag) {
  const io::RunConfig c = load(config);
  const std::string path = out.empty() ? c.output.path : out;
  const std::string format = pick_format(format_flag, c, path);
  Rows r = run_eval(o, c);
  if (path.empty()) {
    write_rows(r, o.subject, c, format, std::cout);
  } else {
    std::ofstream os(path);
    if (!os) throw ConfigError("--out: cannot open " + path);
    write_rows(r, o.subject, c, format, os);
  }
  return kOk;
}

int cmd_solve(const std::string& config, const std::string& out, const std::string& format_flag,
              const std::string& grid, const std::string& route, bool bounds) {
  io::RunConfig c = load(config);
  std::vector<double> t = c.t_nodes, x = c.x_nodes;
  if (!grid.empty()) {
    auto [nt, nx] = parse_grid(grid);
    io::uniform_grid(c.domain, nt, nx, t, x);
  }
  if (t.empty() || x.empty()) throw ConfigError("grid: give --grid NxM or grid.t and grid.x in the configuration");
  const std::string path = out.empty() ? c.output.path : out;
  if (path.empty()) throw ConfigError("output.path: give --out or output.path in the configuration");
  const std::string format = pick_format(format_flag, c, path);
  if (route != "bvp" && route != "composed") throw ConfigError("--route: expected bvp or composed");
  const Route which = route == "bvp" ? Route::bvp : Route::composed;

  std::vector<std::string> failures;
  GridField g;
  try {
    g = evaluate_grid(c.problem, t, x, which, c.ctrl, c.quadrature, bounds && which == Route::bvp, &failures);
  } catch (const IncompatibleData& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  if (!failures.empty()) {
    for (const auto& f : failures) std::cerr << "prabgreen: " << f << "\n";
    std::cerr << "prabgreen: " << failures.size() << " of " << t.size() * x.size() << " points failed\n";
    return kNumericFailure;
  }
  io::write_field(g, path, format);
  std::cout << "wrote " << g.values.size() << " values (" << t.size() << "x" << x.size() << ") to " << path << "\n";
  return kOk;
}

int cmd_verify(const std::string& config, const std::string& suite_flag, const std::string& report,
               std::optional<double> tol) {
  const io::RunConfig c = load(config);
  const std::vector<std::string> names = verify::parse_suite_selector(suite_flag.empty() ? c.verify_suite : suite_flag);
  verify::SuiteConfig cfg{c.params, c.domain, c.ctrl, c.quadrature, tol ? tol : c.verify_tolerance, c.seed};
  const verify::SuiteReport rep = verify::run_suite(names, cfg);
  for (const auto& r : rep.reports) {
    std::ostringstream probe;
    for (const auto& [k, v] : r.probe) probe << " " << k << "=" << v;
    std::printf("%s %-22s%s  abs_err=%.3e rel_err=%.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL", r.identity_id.c_str(),
                probe.str().c_str(), r.abs_err, r.rel_err, r.tol);
  }
  for (const auto& e : rep.exclusions) std::printf("EXCLUDED %s\n", e.c_str());
  std::printf("%zu of %zu identities passed\n", rep.reports.size() - rep.failures(), rep.reports.size());
  if (!report.empty()) {
    std::ofstream os(report);
    if (!os) throw ConfigError("--report: cannot open " + report);
    json j = verify::to_json(rep, names, cfg);
    j["version"] = io::kVersion;
    os << j.dump(2) << "\n";
  }
  return rep.all_pass() ? kOk : kIdentityFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green's-function solver for the Prabhakar-type subdiffusion problem"};
  app.set_version_flag("--version", io::kVersion);
  app.require_subcommand(1);
  std::string config, out, format;

  EvalOptions eo;
  auto* eval = app.add_subcommand("eval", "Evaluate omega, W, G or dG/ds");
  eval->add_option("--subject", eo.subject, "omega | w | green | green_s")->check(CLI::IsMember({"omega", "w", "green", "green_s"}));
  eval->add_option("--t", eo.t, "time (t - eta for w)");
  eval->add_option("--x", eo.x, "spatial argument (x1 for w)");
  eval->add_option("--x2", eo.x2, "second spatial argument of w");
  eval->add_option("--eta", eo.eta, "source time of G");
  eval->add_option("--s", eo.s, "source point of G");
  eval->add_option("--grid", eo.grid, "N: evaluate G on an N x N (x, s) grid over [0, a]");
  eval->add_option("--config", config, "configuration file");
  eval->add_option("--out", out, "output file (default: stdout)");
  eval->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

  std::string grid, route = "bvp";
  bool bounds = false;
  auto* solve = app.add_subcommand("solve", "Solve the boundary value problem on a grid");
  solve->add_option("--config", config, "configuration file");
  solve->add_option("--out", out, "output file");
  solve->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  solve->add_option("--grid", grid, "NxM uniform grid: t_k = T k/N, x_j = a j/(M-1)");
  solve->add_option("--route", route, "bvp | composed");
  solve->add_flag("--bounds", bounds, "add quadrature error estimates (bvp route)");

  std::string suite, report;
  std::optional<double> tol;
  auto* ver = app.add_subcommand("verify", "Run the identity suite");
  ver->add_option("--config", config, "configuration file");
  ver->add_option("--suite", suite, "all or a comma-separated list");
  ver->add_option("--report", report, "JSON report file");
  ver->add_option("--tolerance", tol, "override every identity tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  try {
    if (*eval) return cmd_eval(eo, config, out, format);
    if (*solve) return cmd_solve(config, out, format, grid, route, bounds);
    return cmd_verify(config, suite, report, tol);
  } catch (const ConfigError& e) {
    std::cerr << "prabgreen: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IncompatibleData& e) {
    std::cerr << "prabgreen: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "prabgreen: numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "prabgreen: numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
}
