#pragma once

// Solution of the first initial-boundary value problem: the Green's-function
// representation, the two first-order subproblems, and the composed route
// through the Volterra equation for the boundary function psi.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "prabgreen/errors.hpp"
#include "prabgreen/kernels.hpp"
#include "prabgreen/prabhakar_ops.hpp"
#include "prabgreen/problem.hpp"
#include "prabgreen/quadrature.hpp"
#include "prabgreen/volterra.hpp"

namespace prabgreen {

struct FieldMeta {
  FracParams params;
  Domain domain;
  SeriesControl ctrl;
  QuadratureSpec quadrature;
  std::string provenance;
};

// Values on a rectangular (t, x) grid, stored row-major by t.
struct GridField {
  std::vector<double> t_nodes, x_nodes;
  std::vector<double> values, bounds;
  FieldMeta meta;

  double& at(size_t i, size_t j) { return values[i * x_nodes.size() + j]; }
  double at(size_t i, size_t j) const { return values[i * x_nodes.size() + j]; }
  double bound(size_t i, size_t j) const { return bounds.empty() ? 0.0 : bounds[i * x_nodes.size() + j]; }

  void validate() const {
    if (values.size() != t_nodes.size() * x_nodes.size()) throw DomainError("GridField: value count mismatch");
    if (!bounds.empty() && bounds.size() != values.size()) throw DomainError("GridField: bound count mismatch");
    for (size_t i = 1; i < t_nodes.size(); ++i)
      if (!(t_nodes[i] > t_nodes[i - 1])) throw DomainError("GridField: t nodes must increase");
    for (size_t j = 1; j < x_nodes.size(); ++j)
      if (!(x_nodes[j] > x_nodes[j - 1])) throw DomainError("GridField: x nodes must increase");
    for (double v : values)
      if (!std::isfinite(v)) throw DomainError("GridField: non-finite value");
  }
};

namespace detail {

inline void check_point(const Domain& dom, double horizon, double t, double x, const char* who) {
  if (!(t > 2 * GreenFunction::kMinSeparation && t <= horizon * (1 + 1e-12)))
    throw DomainError(std::string(who) + ": t outside (2e-8, horizon]");
  if (!(x >= 0 && x <= dom.a)) throw DomainError(std::string(who) + ": x outside [0, a]");
}

// v(t, x) of the second first-order subproblem for given psi, tau and f.
inline double v_value(const KernelFamily& om, const TimeFunction& psi, const SpaceFunction& tau,
                      const SpaceTimeFunction& f, const FracParams& p, const Domain& dom, double t, double x,
                      const QuadratureSpec& q) {
  const double a = dom.a, b1 = p.beta1();
  // omega(., 0) vanishes; the boundary value is the limit psi(t).
  if (x >= a) return psi.is_zero() ? 0.0 : psi(t);
  double v = 0.0;
  if (!psi.is_zero())
    v += integrate([&](double eta) { return psi(eta) * om(t - eta, a - x); }, 0.0, t, {psi.sigma0(), 0.0},
                   {0.0, arrival_scale(a - x, p)}, q);
  if (!tau.is_zero()) {
    const KernelSlice k(om, t);
    v += integrate([&](double xi) { return tau(xi) * k(xi - x); }, x, a, {0.0, std::pow(t, b1)}, {}, q);
  }
  if (!f.is_zero()) {
    auto inner = [&](double eta) {
      const double dt = t - eta;
      if (!(dt > 0)) return 0.0;
      const KernelSlice k(om, dt);
      return integrate([&](double xi) { return f(eta, xi) * k(xi - x); }, x, a, {0.0, std::pow(dt, b1)}, {}, q);
    };
    v += integrate(inner, 0.0, t, {f.sigma0, 0.0}, {b1 - 1.0, 0.0}, q);
  }
  return v;
}

// u(t, x) of the first first-order subproblem for given phi0 and v.
inline double u_first_order_value(const KernelFamily& om, const TimeFunction& phi0, const SpaceTimeFunction& v,
                                  const FracParams& p, double t, double x, const QuadratureSpec& q) {
  const double b1 = p.beta1();
  if (x <= 0) return phi0.is_zero() ? 0.0 : phi0(t);
  double u = 0.0;
  if (!phi0.is_zero())
    u += integrate([&](double eta) { return phi0(eta) * om(t - eta, x); }, 0.0, t, {phi0.sigma0(), 0.0},
                   {0.0, arrival_scale(x, p)}, q);
  if (!v.is_zero()) {
    auto inner = [&](double eta) {
      const double dt = t - eta;
      if (!(dt > 0)) return 0.0;
      const KernelSlice k(om, dt);
      return integrate([&](double xi) { return v(eta, xi) * k(x - xi); }, 0.0, x, {}, {0.0, std::pow(dt, b1)}, q);
    };
    u += integrate(inner, 0.0, t, {v.sigma0, 0.0}, {b1 - 1.0, 0.0}, q);
  }
  return u;
}

template <class E>
[[noreturn]] void rethrow_as(const E&, const std::string& msg) {
  throw E(msg);
}

// Rethrows the active library error with the point coordinates prepended.
[[noreturn]] inline void rethrow_at(double t, double x) {
  const std::string where = "at (t=" + std::to_string(t) + ", x=" + std::to_string(x) + "): ";
  try {
    throw;
  } catch (const NonConvergence& e) {
    rethrow_as(e, where + e.what());
  } catch (const QuadratureFailure& e) {
    rethrow_as(e, where + e.what());
  } catch (const StepUnderflow& e) {
    rethrow_as(e, where + e.what());
  } catch (const IncompatibleData& e) {
    rethrow_as(e, where + e.what());
  } catch (const DomainError& e) {
    rethrow_as(e, where + e.what());
  }
}

}  // namespace detail

// u(t,x) = int phi0 omega(t-eta, x) deta + int int v(eta, xi) omega(t-eta, x-xi) dxi deta,
// with v declared through its time singularity v ~ eta^{sigma0}.
inline double solve_u_first_order(const TimeFunction& phi0, const SpaceTimeFunction& v, const FracParams& p,
                                  const Domain& dom, double t, double x, const SeriesControl& c = {},
                                  const QuadratureSpec& q = {}) {
  p.validate();
  dom.validate();
  if (!(t > 0) || !(x >= 0 && x <= dom.a)) throw DomainError("solve_u_first_order: point outside the domain");
  auto fam = detail::cached_family(p, 0.0, 0.0, t, c);
  return detail::u_first_order_value(*fam, phi0, v, p, t, x, q);
}

// v(t,x) = int psi omega(t-eta, a-x) deta + int_x^a tau omega(t, xi-x) dxi
//          + int int f(eta, xi) omega(t-eta, xi-x) dxi deta.
inline double solve_v(const TimeFunction& psi, const SpaceFunction& tau, const SpaceTimeFunction& f,
                      const FracParams& p, const Domain& dom, double t, double x, const SeriesControl& c = {},
                      const QuadratureSpec& q = {}) {
  p.validate();
  dom.validate();
  if (!(t > 0) || !(x >= 0 && x <= dom.a)) throw DomainError("solve_v: point outside the domain");
  auto fam = detail::cached_family(p, 0.0, 0.0, t, c);
  return detail::v_value(*fam, psi, tau, f, p, dom, t, x, q);
}

// Green's-function representation
//   u = int phi0 G_s(., s=0) - int phi1 G_s(., s=a) + int tau G(t,x,0,s) ds + int int f G.
class BvpSolver {
 public:
  BvpSolver(const ProblemData& d, const SeriesControl& c = {}, const QuadratureSpec& q = {}, bool check = true)
      : data_(d), ctrl_(c), quad_(q) {
    d.validate();
    c.validate();
    q.validate();
    if (check) check_compatibility(d, 1e-3, q, c);
    green_ = std::make_shared<GreenFunction>(d.p, d.dom, c, horizon());
  }

  const ProblemData& data() const { return data_; }
  const QuadratureSpec& quadrature() const { return quad_; }
  double horizon() const { return 1.05 * data_.dom.T; }

  double operator()(double t, double x) const { return value(t, x, quad_); }

  // Value with an a-posteriori quadrature error estimate from a coarser rule.
  KernelValue evaluate(double t, double x) const {
    QuadratureSpec coarse = quad_;
    coarse.gauss_points = std::max(2, quad_.gauss_points - 2);
    const double v = value(t, x, quad_);
    return {v, std::fabs(v - value(t, x, coarse))};
  }

  double value(double t, double x, const QuadratureSpec& q) const {
    detail::check_point(data_.dom, horizon(), t, x, "solve_bvp");
    const ProblemData& d = data_;
    const GreenFunction& g = *green_;
    const double a = d.dom.a, top = t;
    double u = 0.0;
    if (!d.phi0.is_zero() && x > 0)
      u += integrate([&](double eta) { return d.phi0(eta) * g.green_s_tau(t - eta, x, 0.0).value; }, 0.0, top,
                     {d.phi0.sigma0(), 0.0}, {0.0, detail::arrival_scale(x, d.p)}, q);
    if (!d.phi1.is_zero() && x < a)
      u -= integrate([&](double eta) { return d.phi1(eta) * g.green_s_tau(t - eta, x, a).value; }, 0.0, top,
                     {d.phi1.sigma0(), 0.0}, {0.0, detail::arrival_scale(a - x, d.p)}, q);
    if (!d.tau.is_zero()) u += space_integral([&](double s) { return d.tau(s); }, t, x, q);
    if (!d.f.is_zero()) {
      auto inner = [&](double eta) { return space_integral([&](double s) { return d.f(eta, s); }, t - eta, x, q); };
      u += integrate(inner, 0.0, top, {d.f.sigma0, 0.0}, {d.p.beta - 1.0, 0.0}, q);
    }
    return u;
  }

 private:
  // int_0^a h(s) G(tau; x, s) ds, split at the kink s = x.
  template <class H>
  double space_integral(H&& h, double tau, double x, const QuadratureSpec& q) const {
    const GreenSlice g(*green_, tau);
    const double layer = std::pow(tau, data_.p.beta1());
    auto integrand = [&](double s) { return h(s) * g.green(x, s).value; };
    return integrate(integrand, 0.0, x, {}, {0.0, layer}, q) +
           integrate(integrand, x, data_.dom.a, {0.0, layer}, {}, q);
  }

  ProblemData data_;
  SeriesControl ctrl_;
  QuadratureSpec quad_;
  std::shared_ptr<const GreenFunction> green_;
};

inline double solve_bvp(const ProblemData& d, double t, double x, const SeriesControl& c = {},
                        const QuadratureSpec& q = {}) {
  return BvpSolver(d, c, q)(t, x);
}

// Route psi1 -> psi -> v -> u through the first-order subproblems, with v
// tabulated on a graded time grid times a uniform space grid.
class ComposedSolver {
 public:
  static constexpr int kSpaceNodes = 33;
  static constexpr size_t kStencil = 6;

  ComposedSolver(const ProblemData& d, const SeriesControl& c = {}, const QuadratureSpec& q = {},
                 double horizon = 0.0, bool check = true)
      : data_(d), ctrl_(c), quad_(q), horizon_(horizon > 0 ? horizon : d.dom.T) {
    d.validate();
    if (check) check_compatibility(d, 1e-3, q, c);
    volterra_ = std::make_shared<VolterraSolution>(d, c, q, horizon_);
    omega_ = std::make_shared<KernelFamily>(d.p, 0.0, 0.0, 1.05 * horizon_, c);
    if (d.is_zero()) return;
    const double a = d.dom.a;
    for (int j = 0; j < kSpaceNodes; ++j) xi_.push_back(a * j / (kSpaceNodes - 1));
    const std::vector<double> eta = detail::table_grid(horizon_ * 1.001, 1e-6, 1.2, 1.0 / 16);
    const TimeFunction& psi = volterra_->psi();
    const double s0 = d.p.beta1() - 1.0;
    for (int j = 0; j < kSpaceNodes; ++j) {
      std::vector<double> col(eta.size());
      for (size_t i = 0; i < eta.size(); ++i)
        col[i] = j + 1 == kSpaceNodes ? psi(eta[i]) : detail::v_value(*omega_, psi, d.tau, d.f, d.p, d.dom, eta[i], xi_[j], q);
      columns_.push_back(TimeFunction::sampled(eta, col, s0));
    }
    v_field_.sigma0 = s0;
    v_field_.fn = [this](double t, double x) { return v(t, x); };
  }

  const VolterraSolution& volterra() const { return *volterra_; }
  double horizon() const { return horizon_; }

  // Interpolated v(t, x) from the table.
  double v(double t, double x) const {
    if (columns_.empty()) return 0.0;
    const size_t n = xi_.size(), w = std::min(kStencil, n);
    const size_t i = std::upper_bound(xi_.begin(), xi_.end(), x) - xi_.begin();
    const size_t j = std::min(i < w / 2 ? 0 : i - w / 2, n - w);
    double sum = 0.0;
    for (size_t k = j; k < j + w; ++k) {
      double l = 1.0;
      for (size_t m = j; m < j + w; ++m)
        if (m != k) l *= (x - xi_[m]) / (xi_[k] - xi_[m]);
      sum += l * columns_[k](t);
    }
    return sum;
  }

  double operator()(double t, double x) const {
    detail::check_point(data_.dom, horizon_ * 1.01, t, x, "solve_bvp_composed");
    if (data_.is_zero()) return 0.0;
    return detail::u_first_order_value(*omega_, data_.phi0, v_field_, data_.p, t, x, quad_);
  }

 private:
  ProblemData data_;
  SeriesControl ctrl_;
  QuadratureSpec quad_;
  double horizon_;
  std::shared_ptr<const VolterraSolution> volterra_;
  std::shared_ptr<const KernelFamily> omega_;
  std::vector<double> xi_;
  std::vector<TimeFunction> columns_;
  SpaceTimeFunction v_field_;
};

inline double solve_bvp_composed(const ProblemData& d, double t, double x, const SeriesControl& c = {},
                                 const QuadratureSpec& q = {}) {
  return ComposedSolver(d, c, q, t)(t, x);
}

// u(t, x -> boundary) by Richardson extrapolation from x = h, 2h inside.
template <class U>
double boundary_limit(U&& u, double t, double boundary, double inward, double h) {
  return 2.0 * u(t, boundary + inward * h) - u(t, boundary + 2.0 * inward * h);
}

enum class Route { bvp, composed };

// u on the tensor grid. Point failures carry their coordinates; with a
// failures list they are collected there (value left at 0) instead of thrown.
inline GridField evaluate_grid(const ProblemData& d, const std::vector<double>& t_nodes,
                               const std::vector<double>& x_nodes, Route which, const SeriesControl& c = {},
                               const QuadratureSpec& q = {}, bool with_bounds = false,
                               std::vector<std::string>* failures = nullptr) {
  GridField g;
  g.t_nodes = t_nodes;
  g.x_nodes = x_nodes;
  g.meta = {d.p, d.dom, c, q, which == Route::bvp ? "solve_bvp" : "solve_bvp_composed"};
  g.values.assign(t_nodes.size() * x_nodes.size(), 0.0);
  if (with_bounds) g.bounds.assign(g.values.size(), 0.0);
  if (t_nodes.empty() || x_nodes.empty()) return g;
  for (double t : t_nodes)
    if (!(t > 0 && t <= d.dom.T * (1 + 1e-12))) throw DomainError("evaluate_grid: t node outside (0, T]");
  for (double x : x_nodes)
    if (!(x >= 0 && x <= d.dom.a)) throw DomainError("evaluate_grid: x node outside [0, a]");
  std::unique_ptr<BvpSolver> bvp;
  std::unique_ptr<ComposedSolver> comp;
  if (which == Route::bvp)
    bvp = std::make_unique<BvpSolver>(d, c, q);
  else
    comp = std::make_unique<ComposedSolver>(d, c, q, *std::max_element(t_nodes.begin(), t_nodes.end()));
  for (size_t i = 0; i < t_nodes.size(); ++i)
    for (size_t j = 0; j < x_nodes.size(); ++j) {
      const double t = t_nodes[i], x = x_nodes[j];
      try {
        if (bvp && with_bounds) {
          KernelValue kv = bvp->evaluate(t, x);
          g.at(i, j) = kv.value;
          g.bounds[i * x_nodes.size() + j] = kv.bound;
        } else {
          g.at(i, j) = bvp ? (*bvp)(t, x) : (*comp)(t, x);
        }
      } catch (const Error&) {
        if (!failures) detail::rethrow_at(t, x);
        try {
          detail::rethrow_at(t, x);
        } catch (const Error& e) {
          failures->push_back(e.what());
        }
      }
    }
  g.validate();
  return g;
}

}  // namespace prabgreen
