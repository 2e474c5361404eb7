#pragma once

// Volterra equation for the auxiliary boundary function psi1,
//   psi1(t) - int_0^t omega(t-y, 2a) psi1(y) dy = F(t),
// solved by its Neumann series with the iterated kernels omega(., 2na), and
// recovery of psi = 2 D^{beta1,gamma1} psi1.

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "prabgreen/kernels.hpp"
#include "prabgreen/prabhakar_ops.hpp"
#include "prabgreen/problem.hpp"
#include "prabgreen/quadrature.hpp"

namespace prabgreen {

namespace detail {

// Nodes from H floor up to H growing geometrically by ratio, with steps
// capped at max_step; tabulated profiles behave like sums of powers of t.
inline std::vector<double> table_grid(double horizon, double floor = 1e-6, double ratio = 1.08,
                                      double max_step_frac = 1.0 / 48) {
  std::vector<double> t{horizon * floor};
  const double cap = horizon * max_step_frac;
  while (t.back() < horizon) t.push_back(t.back() + std::min((ratio - 1.0) * t.back(), cap));
  t.back() = horizon;
  // Merge a short final step into the previous one.
  if (t.size() > 4 && t[t.size() - 1] - t[t.size() - 2] < 0.3 * (t[t.size() - 2] - t[t.size() - 3]))
    t.erase(t.end() - 2);
  return t;
}

// Width of the layer in which omega(., x) switches on, a tenth of x^{1/beta1}.
inline double arrival_scale(double x, const FracParams& p) { return 0.1 * std::pow(x, 1.0 / p.beta1()); }

}  // namespace detail

// F(t) = phi1(t) - int phi0(eta) omega(t-eta, a) deta - int tau(s) W(t, a-s, a+s) ds
//        - int int f(y, s) W(t-y, a-s, a+s) ds dy.
inline double assemble_big_f(const ProblemData& d, const GreenFunction& g, double t, const QuadratureSpec& q = {}) {
  if (!(t > 0 && t <= d.dom.T * (1 + 1e-12) + 0.01 * d.dom.T))
    throw DomainError("assemble_big_f: t must lie in (0, T]");
  const double a = d.dom.a, b1 = d.p.beta1();
  double v = d.phi1.is_zero() ? 0.0 : d.phi1(t);
  if (!d.phi0.is_zero()) {
    const auto& om = g.omega();
    v -= integrate([&](double eta) { return d.phi0(eta) * om(t - eta, a); }, 0.0, t, {d.phi0.sigma0(), 0.0},
                   {0.0, detail::arrival_scale(a, d.p)}, q);
  }
  if (!d.tau.is_zero()) {
    const GreenSlice gs(g, t);
    v -= integrate([&](double s) { return d.tau(s) * gs.w(a - s, a + s); }, 0.0, a, {}, {0.0, std::pow(t, b1)}, q);
  }
  if (!d.f.is_zero()) {
    auto inner = [&](double y) {
      const double dt = t - y;
      if (!(dt > 0)) return 0.0;
      const GreenSlice gs(g, dt);
      return integrate([&](double s) { return d.f(y, s) * gs.w(a - s, a + s); }, 0.0, a, {},
                       {0.0, std::pow(dt, b1)}, q);
    };
    v -= integrate(inner, 0.0, t, {d.f.sigma0, 0.0}, {d.p.beta - 1.0, 0.0}, q);
  }
  return v;
}

// Sum over n >= 1 of omega(tau, 2na), truncated like the image sums.
inline double neumann_kernel(const GreenFunction& g, double tau, const SeriesControl& c = {}) {
  const double a = g.domain().a;
  double sum = 0.0, scale = 0.0, last = 0.0;
  for (int n = 1; n <= c.max_images; ++n) {
    const double term = g.omega()(tau, 2.0 * n * a);
    sum += term;
    last = std::fabs(term);
    scale = std::max(scale, last);
    if (last == 0.0 || last <= c.rel_tol * scale) return sum;
  }
  if (last > std::max(c.abs_tol, detail::kImageCapTolerance * scale))
    throw NonConvergence("neumann_kernel: iterated kernels not negligible within max_images");
  return sum;
}

// psi = 2 D^{beta1,gamma1} psi1 for a given psi1 profile.
inline double recover_psi(const TimeFunction& psi1, const FracParams& p, double t, const QuadratureSpec& q = {},
                          const SeriesControl& c = {}) {
  if (psi1.is_zero()) return 0.0;
  return 2.0 * prl_derivative(psi1, OperatorParams::half(p), t, q, c);
}

// F, psi1 and psi tabulated on a graded grid over (0, horizon].
class VolterraSolution {
 public:
  VolterraSolution(const ProblemData& d, const SeriesControl& c = {}, const QuadratureSpec& q = {},
                   double horizon = 0.0)
      : data_(d), ctrl_(c), quad_(q) {
    d.validate();
    c.validate();
    q.validate();
    horizon_ = horizon > 0 ? horizon : d.dom.T;
    green_ = std::make_shared<GreenFunction>(d.p, d.dom, c, 1.05 * horizon_);
    zero_ = d.phi0.is_zero() && d.phi1.is_zero() && d.tau.is_zero() && d.f.is_zero();
    if (zero_) return;
    const double b = d.p.beta, b1 = d.p.beta1();
    sigma_f_ = b - 1.0;
    if (!d.phi1.is_zero()) sigma_f_ = std::min(sigma_f_, d.phi1.sigma0());
    // Tables reach slightly past the horizon for the derivative step.
    std::vector<double> t = detail::table_grid(horizon_ * 1.001);
    std::vector<double> fv(t.size()), p1(t.size()), ps(t.size());
    for (size_t i = 0; i < t.size(); ++i) fv[i] = assemble_big_f(d, *green_, t[i], q);
    big_f_ = TimeFunction::sampled(t, fv, sigma_f_);
    for (size_t i = 0; i < t.size(); ++i) p1[i] = fv[i] + resolvent_integral(big_f_, t[i]);
    psi1_ = TimeFunction::sampled(t, p1, sigma_f_);
    for (size_t i = 0; i < t.size(); ++i) ps[i] = recover_psi(psi1_, d.p, t[i], q, c);
    psi_ = TimeFunction::sampled(t, ps, sigma_f_ - b1);
  }

  const ProblemData& data() const { return data_; }
  const GreenFunction& green() const { return *green_; }
  double horizon() const { return horizon_; }

  const TimeFunction& big_f() const { return big_f_; }
  const TimeFunction& psi1() const { return psi1_; }
  const TimeFunction& psi() const { return psi_; }

  // psi1(t) by the Neumann series against the tabulated F.
  double psi1_at(double t) const {
    if (zero_) return 0.0;
    return assemble_big_f(data_, *green_, t, quad_) + resolvent_integral(big_f_, t);
  }

  // psi(t) = 2 D^{beta1,gamma1} psi1 from the psi1 table.
  double psi_at(double t) const {
    if (zero_) return 0.0;
    return recover_psi(psi1_, data_.p, t, quad_, ctrl_);
  }

  // int_0^t F(y) sum_{n>=1} omega(t-y, 2na) dy.
  double resolvent_integral(const TimeFunction& F, double t) const {
    if (F.is_zero()) return 0.0;
    return integrate([&](double y) { return F(y) * neumann_kernel(*green_, t - y, ctrl_); }, 0.0, t,
                     {F.sigma0(), 0.0}, {0.0, detail::arrival_scale(2.0 * data_.dom.a, data_.p)}, quad_);
  }

 private:
  ProblemData data_;
  SeriesControl ctrl_;
  QuadratureSpec quad_;
  double horizon_ = 0.0;
  double sigma_f_ = 0.0;
  bool zero_ = false;
  std::shared_ptr<const GreenFunction> green_;
  TimeFunction big_f_, psi1_, psi_;
};

inline double assemble_big_f(const ProblemData& d, double t, const SeriesControl& c = {},
                             const QuadratureSpec& q = {}) {
  d.validate();
  return assemble_big_f(d, *detail::cached_green(d.p, d.dom, c), t, q);
}

inline double neumann_psi1(const ProblemData& d, double t, const SeriesControl& c = {}, const QuadratureSpec& q = {}) {
  return VolterraSolution(d, c, q, t).psi1_at(t);
}

inline double recover_psi(const ProblemData& d, double t, const SeriesControl& c = {}, const QuadratureSpec& q = {}) {
  return VolterraSolution(d, c, q, t).psi_at(t);
}

}  // namespace prabgreen
