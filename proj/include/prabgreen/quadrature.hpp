#pragma once

// Composite Gauss-Legendre quadrature on meshes refined toward endpoint
// singularities and boundary layers.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "prabgreen/errors.hpp"

namespace prabgreen {

struct QuadratureSpec {
  int panels = 32;        // mesh intervals of the product-integration rule
  double grading = 0.0;   // mesh-grading exponent; 0 selects the automatic value
  int interp_order = 2;   // local interpolation degree, 1 or 2
  int gauss_points = 10;  // nodes per panel of the composite Gauss rule

  void validate() const {
    if (panels < 4) throw DomainError("QuadratureSpec: panels must be at least 4");
    if (!(grading == 0.0 || grading >= 1.0)) throw DomainError("QuadratureSpec: grading must be 0 (auto) or >= 1");
    if (interp_order != 1 && interp_order != 2) throw DomainError("QuadratureSpec: interp_order must be 1 or 2");
    if (gauss_points < 2 || gauss_points > 64) throw DomainError("QuadratureSpec: gauss_points must lie in [2,64]");
  }

  // Grading used for an operator of the given order: 4/order, capped at 6.
  double grading_for(double order) const {
    if (grading > 0) return grading;
    double o = std::clamp(order, 1e-3, 1.0);
    return std::min(6.0, 4.0 / o);
  }
};

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};

namespace detail {

inline GaussRule compute_gauss_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    // Derivative at the converged node.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

}  // namespace detail

inline const GaussRule& gauss_rule(int n) {
  static std::mutex mtx;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(detail::compute_gauss_rule(n));
  return *slot;
}

// Behaviour of an integrand near one end of the interval.
struct Endpoint {
  double singularity = 0.0;  // integrand ~ d^singularity at distance d, > -1
  double layer = 0.0;        // width of a layer to resolve, 0 if none

  bool active() const { return singularity != 0.0 || layer > 0.0; }
};

namespace detail {

// Geometric distances from an endpoint, outermost first.
inline std::vector<double> geometric_levels(double span, const Endpoint& e) {
  std::vector<double> d;
  if (!e.active()) return d;
  // A layer alone needs panels down to a fraction of its width.
  double stop = e.singularity != 0.0 ? span * 1e-5 : 0.25 * span;
  if (e.layer > 0) stop = std::min(stop, 0.05 * e.layer);
  stop = std::max(stop, span * 1e-15);
  for (double x = 0.25 * span; x >= stop && d.size() < 60; x *= 0.5) d.push_back(x);
  if (d.empty()) d.push_back(0.25 * span);
  return d;
}

template <class F>
double gauss_panel(F& f, double lo, double hi, const GaussRule& g) {
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  double s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(c + h * g.x[i]);
  return s * h;
}

// Panel [lo, lo + len] (or [hi - len, hi]) holding an endpoint power
// singularity, integrated after the substitution d = len v^{1/(1+sigma)}.
template <class F>
double singular_panel(F& f, double end, double len, double sigma, bool from_left, const GaussRule& g) {
  const double p = 1.0 / (1.0 + sigma);
  double s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) {
    double v = 0.5 * (1.0 + g.x[i]);
    double d = len * std::pow(v, p);
    double jac = len * p * std::pow(v, p - 1.0);
    double x = from_left ? end + d : end - d;
    // The node rounds to a distance dx != d; rescale the declared power so
    // the rule sees d^sigma.
    const double dx = from_left ? x - end : end - x;
    const double fix = dx > 0 && dx != d ? std::pow(d / dx, sigma) : 1.0;
    s += 0.5 * g.w[i] * jac * f(x) * fix;
  }
  return s;
}

}  // namespace detail

// Integral of f over [lo, hi]; the mesh is refined geometrically toward
// each active endpoint and the innermost panel absorbs a power singularity.
template <class F>
double integrate(F&& f, double lo, double hi, Endpoint left = {}, Endpoint right = {},
                 const QuadratureSpec& q = {}) {
  if (!(hi > lo)) {
    if (hi == lo) return 0.0;
    throw DomainError("integrate: requires lo <= hi");
  }
  const GaussRule& g = gauss_rule(q.gauss_points);
  const double span = hi - lo;
  std::vector<double> dl = detail::geometric_levels(span, left), dr = detail::geometric_levels(span, right);
  double total = 0.0;

  double mid_lo = lo, mid_hi = hi;
  if (!dl.empty()) {
    mid_lo = lo + dl.front();
    double inner = dl.back();
    total += left.singularity != 0.0 ? detail::singular_panel(f, lo, inner, left.singularity, true, g)
                                     : detail::gauss_panel(f, lo, lo + inner, g);
    for (size_t k = dl.size() - 1; k > 0; --k) total += detail::gauss_panel(f, lo + dl[k], lo + dl[k - 1], g);
  }
  if (!dr.empty()) {
    mid_hi = hi - dr.front();
    double inner = dr.back();
    total += right.singularity != 0.0 ? detail::singular_panel(f, hi, inner, right.singularity, false, g)
                                      : detail::gauss_panel(f, hi - inner, hi, g);
    for (size_t k = dr.size() - 1; k > 0; --k) total += detail::gauss_panel(f, hi - dr[k - 1], hi - dr[k], g);
  }
  const int n_mid = std::max(2, q.panels / 8);
  const double h = (mid_hi - mid_lo) / n_mid;
  for (int i = 0; i < n_mid; ++i) {
    double a = mid_lo + i * h, b = (i + 1 == n_mid) ? mid_hi : mid_lo + (i + 1) * h;
    total += detail::gauss_panel(f, a, b, g);
  }
  if (!std::isfinite(total)) throw QuadratureFailure("integrate: non-finite result");
  return total;
}

// Two-sided graded mesh on [0, t]: nodes (t/2)(i/n)^g mirrored about t/2.
inline std::vector<double> graded_mesh(double t, int panels, double grading) {
  const int n = std::max(2, panels / 2);
  std::vector<double> m(2 * n + 1);
  for (int i = 0; i <= n; ++i) {
    double d = 0.5 * t * std::pow(static_cast<double>(i) / n, grading);
    m[i] = d;
    m[2 * n - i] = t - d;
  }
  m[n] = 0.5 * t;
  return m;
}

}  // namespace prabgreen
