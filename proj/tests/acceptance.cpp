// Acceptance runner: one PASS/FAIL line per criterion with the measured
// error, its tolerance, and the wall time against the runtime budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "prabgreen/io.hpp"
#include "prabgreen/solver.hpp"
#include "prabgreen/verify.hpp"

using namespace prabgreen;

namespace {

const FracParams P{0.7, 0.9, 0.5, -1.0};
const Domain D{1.0, 1.0};
const double PI = 3.14159265358979323846;

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Pass count, worst error and tolerance range of a report list.
Outcome from_reports(const std::vector<verify::IdentityReport>& reps, size_t expected) {
  Outcome o;
  double worst = 0.0, lo = INFINITY, hi = 0.0;
  size_t passed = 0;
  for (const auto& r : reps) {
    worst = std::max(worst, std::min(r.abs_err, r.rel_err));
    lo = std::min(lo, r.tol);
    hi = std::max(hi, r.tol);
    passed += r.pass;
  }
  o.pass = passed == reps.size() && reps.size() == expected;
  o.detail = std::to_string(passed) + "/" + std::to_string(reps.size()) + " pass (expected " + std::to_string(expected) +
             "), worst min(abs,rel) err " + fmt("%.2e", worst) + ", tol " +
             (reps.empty() ? "-" : lo == hi ? fmt("%.0e", lo) : fmt("%.0e", lo) + ".." + fmt("%.0e", hi));
  return o;
}

ProblemData sine_tau(const FracParams& p = P) { return verify::detail::sine_problem(p, D); }

ProblemData sine_source() {
  ProblemData d;
  d.p = P;
  d.dom = D;
  d.f.fn = [](double t, double x) { return std::sin(PI * x) * std::pow(t, P.beta - 1.0); };
  d.f.sigma0 = P.beta - 1.0;
  return d;
}

// phi0 = phi1 = t^{beta-1}, tau its weighted initial limit.
ProblemData power_boundary() {
  ProblemData d;
  d.p = P;
  d.dom = D;
  d.phi0 = TimeFunction::callable([](double t) { return std::pow(t, P.beta - 1.0); }, P.beta - 1.0);
  d.phi1 = d.phi0;
  const double lim = weighted_initial_limit(d.phi0, P);
  d.tau.fn = [lim](double) { return lim; };
  return d;
}

// The 16 x 16 grid t_k = 0.0225 k, x_j = j / 15: lambda_1 t^beta stays below 4.
void spectral_grid(std::vector<double>& t, std::vector<double>& x) {
  for (int k = 1; k <= 16; ++k) t.push_back(0.0225 * k);
  for (int j = 0; j < 16; ++j) x.push_back(D.a * j / 15.0);
}

Outcome special_sanity() {
  Outcome o;
  const double e1 = rel(prabhakar_e(1, 1, 1, 1), std::exp(1.0));
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> ua(0.2, 2.0), ub(0.2, 3.0), uz(-10.0, 10.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double a = ua(rng), b = ub(rng), z = uz(rng);
    worst = std::max(worst, std::fabs(prabhakar_e(a, b, 0.0, z) - 1.0 / std::tgamma(b)));
  }
  o.pass = e1 <= 1e-12 && worst <= 1e-13;
  o.detail = "E(1,1,1,1) vs e rel " + fmt("%.2e", e1) + " (tol 1e-12); gamma=0 panel max abs " + fmt("%.2e", worst) +
             " (tol 1e-13, 20 probes)";
  return o;
}

Outcome power_rule() {
  const OperatorParams op = OperatorParams::full(P);
  double worst = 0.0;
  for (double sigma : {0.5, 1.0, 2.0}) {
    TimeFunction f = TimeFunction::callable([sigma](double s) { return std::pow(s, sigma - 1.0); },
                                            std::min(0.0, sigma - 1.0));
    for (double t : {0.25, 0.5, 1.0}) {
      const double closed = std::tgamma(sigma) * std::pow(t, P.beta + sigma - 1.0) *
                            prabhakar_e(P.alpha, P.beta + sigma, P.gamma, P.delta * std::pow(t, P.alpha));
      worst = std::max(worst, rel(prabhakar_integral(f, op, t), closed));
    }
  }
  return {worst <= 1e-8, "max rel " + fmt("%.2e", worst) + " over 9 (sigma, t), tol 1e-8"};
}

Outcome half_order() {
  const OperatorParams full = OperatorParams::full(P), half = OperatorParams::half(P);
  double quad = 0.0, closed = 0.0;
  for (double sigma : {1.5, 2.0}) {
    const MlPower f = MlPower::power(sigma, P.alpha, P.delta);
    const MlPower twice = f.rl_derivative(half).rl_derivative(half);
    const TimeFunction ff = f.as_time_function();
    const double s0 = std::min(0.0, f.rl_derivative(half).sigma - 1.0);
    const TimeFunction inner = TimeFunction::callable([ff, half](double s) { return prl_derivative(ff, half, s); }, s0);
    for (double t : {0.3, 0.6, 0.9}) {
      // Gamma(sigma) t^{sigma-beta-1} E^{-gamma}_{alpha,sigma-beta}(delta t^alpha).
      const double once = std::tgamma(sigma) * std::pow(t, sigma - P.beta - 1.0) *
                          prabhakar_e(P.alpha, sigma - P.beta, -P.gamma, P.delta * std::pow(t, P.alpha));
      closed = std::max(closed, rel(twice(t), once));
      quad = std::max(quad, rel(prl_derivative(inner, half, t), prl_derivative(ff, full, t)));
    }
  }
  return {quad <= 1e-5 && closed <= 1e-12,
          "quadrature max rel " + fmt("%.2e", quad) + " (tol 1e-5); closed forms max rel " + fmt("%.2e", closed) +
              " (tol 1e-12)"};
}

verify::SuiteConfig suite_config() {
  verify::SuiteConfig cfg;
  cfg.p = P;
  cfg.dom = D;
  return cfg;
}

Outcome green_structure() {
  std::mt19937_64 rng(25);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double edge = 0.0, sym = 0.0;
  for (int k = 0; k < 25; ++k) {
    const double t = 0.05 + 0.95 * u(rng), eta = (t - 0.05) * u(rng), x = D.a * u(rng), s = D.a * u(rng);
    for (double b : {0.0, D.a}) {
      const KernelValue g = green_value(t, x, eta, b, P, D);
      edge = std::max(edge, std::fabs(g.value) + g.bound);
    }
    sym = std::max(sym, std::fabs(green(t, x, eta, s, P, D) - green(t, s, eta, x, P, D)));
  }
  return {edge <= 1e-8 && sym <= 1e-10, "boundary max |G|+bound " + fmt("%.2e", edge) + " (tol 1e-8); symmetry max abs " +
                                            fmt("%.2e", sym) + " (tol 1e-10), 25 points"};
}

Outcome conditions() {
  const ProblemData d = sine_tau();
  BvpSolver s(d);
  double bc = 0.0;
  for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    bc = std::max(bc, std::fabs(boundary_limit(s, t, 0.0, 1.0, 1e-3)));
    bc = std::max(bc, std::fabs(boundary_limit(s, t, D.a, -1.0, 1e-3)));
  }
  // I^{1-beta,-gamma} u at t = 2^-8, 2^-10, 2^-12, Richardson in the t^beta leading correction.
  const OperatorParams op{P.alpha, 1.0 - P.beta, -P.gamma, P.delta};
  QuadratureSpec q;
  q.grading = 2.0;
  double ic = 0.0;
  for (double x : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const TimeFunction u = TimeFunction::callable([&, x](double t) { return s(t, x); }, P.beta - 1.0);
    double I[3];
    for (int k = 0; k < 3; ++k) I[k] = prabhakar_integral(u, op, std::ldexp(1.0, -8 - 2 * k), q);
    const double r = std::pow(4.0, P.beta);
    ic = std::max(ic, std::fabs((r * I[2] - I[1]) / (r - 1) - d.tau(x)));
  }
  return {bc <= 1e-3 && ic <= 1e-3, "boundary max abs " + fmt("%.2e", bc) + " (tol 1e-3, 5 t x 2 ends); initial limit max abs " +
                                        fmt("%.2e", ic) + " (tol 1e-3, 5 x)"};
}

// max |D u - u_xx - f| / max(|D u|, |u_xx|, |f|) at t in {0.2, 0.4, 0.6}, x in {0.25, 0.5, 0.75}.
double residual(const ProblemData& d) {
  BvpSolver s(d);
  const OperatorParams full = OperatorParams::full(P);
  double worst = 0.0;
  for (double x : {0.25, 0.5, 0.75}) {
    const std::vector<double> nodes = detail::table_grid(0.61, 1e-6, 1.2, 1.0 / 16);
    std::vector<double> vals;
    for (double t : nodes) vals.push_back(s(t, x));
    const TimeFunction u = TimeFunction::sampled(nodes, vals, P.beta - 1.0);
    for (double t : {0.2, 0.4, 0.6}) {
      const double h = 0.05;
      const double uxx =
          (-s(t, x + 2 * h) + 16 * s(t, x + h) - 30 * s(t, x) + 16 * s(t, x - h) - s(t, x - 2 * h)) / (12 * h * h);
      const double du = prl_derivative(u, full, t);
      const double f = d.f.is_zero() ? 0.0 : d.f(t, x);
      const double scale = std::max({std::fabs(du), std::fabs(uxx), std::fabs(f)});
      worst = std::max(worst, std::fabs(du - uxx - f) / scale);
    }
  }
  return worst;
}

Outcome pde_residual() {
  const double a = residual(sine_tau()), b = residual(sine_source());
  return {a <= 1e-3 && b <= 1e-3, "sine-tau max rel " + fmt("%.2e", a) + ", sine source max rel " + fmt("%.2e", b) +
                                      " (tol 1e-3, 9 points each)"};
}

Outcome spectral_equivalence() {
  std::vector<double> t, x;
  spectral_grid(t, x);
  const GridField g = evaluate_grid(sine_tau(), t, x, Route::bvp);
  double worst = 0.0;
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      worst = std::max(worst, std::fabs(g.at(i, j) - verify::spectral_oracle_u(P, D, {1.0}, t[i], x[j])));
  return {worst <= 1e-4, "16x16 max abs " + fmt("%.2e", worst) + " (tol 1e-4), lambda_1 t^beta <= " +
                             fmt("%.2f", PI * PI * std::pow(t.back(), P.beta))};
}

Outcome classical_reduction() {
  FracParams p0 = P;
  p0.delta = 0.0;
  std::vector<double> t, x;
  spectral_grid(t, x);
  const GridField g = evaluate_grid(sine_tau(p0), t, x, Route::bvp);
  double worst = 0.0;
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j)
      worst = std::max(worst, std::fabs(g.at(i, j) - verify::classical_mode(P.beta, PI * PI, t[i]) * std::sin(PI * x[j])));
  return {worst <= 1e-4, "16x16 max abs " + fmt("%.2e", worst) + " (tol 1e-4)"};
}

Outcome route_equivalence() {
  double worst[2] = {0.0, 0.0};
  const ProblemData problems[2] = {sine_tau(), power_boundary()};
  for (int k = 0; k < 2; ++k) {
    BvpSolver b(problems[k]);
    ComposedSolver c(problems[k], {}, {}, 0.8);
    for (double t : {0.05, 0.3, 0.8})
      for (double x : {0.25, 0.5, 0.75}) worst[k] = std::max(worst[k], rel(c(t, x), b(t, x)));
  }
  return {worst[0] <= 1e-3 && worst[1] <= 1e-3, "sine-tau max rel " + fmt("%.2e", worst[0]) + ", power boundary max rel " +
                                                    fmt("%.2e", worst[1]) + " (tol 1e-3, 9 points each)"};
}

struct Criterion {
  int id;
  const char* name;
  double budget;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const verify::SuiteConfig cfg = suite_config();
  const std::vector<Criterion> criteria{
      {1, "special-function sanity", 1, special_sanity},
      {2, "power-rule oracle", 10, power_rule},
      {3, "half-order composition", 10, half_order},
      {4, "convolution semigroup", 30, [&] { return from_reports(verify::check_convolution(P, verify::default_convolution_probes()), 9); }},
      {5, "A5 integral identity", 30, [&] { return from_reports(verify::run_identity_suite("a5", cfg), 3); }},
      {6, "A6 iterated kernel", 60, [&] { return from_reports(verify::run_identity_suite("a6", cfg), 2); }},
      {7, "combinatorial identities", 1,
       [&] {
         auto reps = verify::check_combinatorics(20);
         return from_reports(reps, reps.size());
       }},
      {8, "Green's-function structure", 30, green_structure},
      {9, "boundary and initial recovery", 120, conditions},
      {10, "PDE residual", 180, pde_residual},
      {11, "spectral-oracle equivalence", 180, spectral_equivalence},
      {12, "classical reduction", 120, classical_reduction},
      {13, "route equivalence", 300, route_equivalence},
      {14, "Wright bound and W decay", 30, [&] { return from_reports(verify::run_identity_suite("a7", cfg), 7); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s  %2d  %-30s %s; %.2f s (budget %g s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.budget, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
