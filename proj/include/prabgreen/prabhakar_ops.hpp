#pragma once

// Prabhakar integral and derivatives by product integration, plus the
// closed-form rules for the family t^{sigma-1} E^{w}_{alpha,sigma}(delta t^alpha).

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "prabgreen/errors.hpp"
#include "prabgreen/params.hpp"
#include "prabgreen/quadrature.hpp"
#include "prabgreen/special.hpp"

namespace prabgreen {

// A function of time on (0, T], either callable or tabulated, with a
// declared behaviour f(t) ~ t^{sigma0} near t = 0.
class TimeFunction {
 public:
  TimeFunction() = default;

  static TimeFunction zero() { return TimeFunction(); }

  static TimeFunction callable(std::function<double(double)> f, double sigma0 = 0.0) {
    check_sigma0(sigma0);
    TimeFunction r;
    r.kind_ = Kind::callable;
    r.fn_ = std::make_shared<std::function<double(double)>>(std::move(f));
    r.sigma0_ = sigma0;
    return r;
  }

  // Samples (t_i, f_i); t^{-sigma0} f is interpolated by local quintics.
  static TimeFunction sampled(std::vector<double> t, std::vector<double> f, double sigma0 = 0.0) {
    check_sigma0(sigma0);
    if (t.size() != f.size() || t.size() < 4) throw DomainError("TimeFunction: need at least 4 matching samples");
    for (size_t i = 0; i < t.size(); ++i) {
      if (!(t[i] > 0) || !std::isfinite(t[i]) || !std::isfinite(f[i]))
        throw DomainError("TimeFunction: sample times must be positive and values finite");
      if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("TimeFunction: sample times must increase strictly");
    }
    TimeFunction r;
    r.kind_ = Kind::sampled;
    auto tab = std::make_shared<Table>();
    tab->t = std::move(t);
    tab->g.resize(f.size());
    for (size_t i = 0; i < f.size(); ++i) tab->g[i] = f[i] * std::pow(tab->t[i], -sigma0);
    r.tab_ = std::move(tab);
    r.sigma0_ = sigma0;
    return r;
  }

  bool is_zero() const { return kind_ == Kind::zero; }
  double sigma0() const { return sigma0_; }

  double operator()(double t) const {
    switch (kind_) {
      case Kind::zero:
        return 0.0;
      case Kind::callable:
        return (*fn_)(t);
      case Kind::sampled:
        return smooth(t) * std::pow(t, sigma0_);
    }
    return 0.0;
  }

  // t^{-sigma0} f(t).
  double smooth(double t) const {
    switch (kind_) {
      case Kind::zero:
        return 0.0;
      case Kind::callable:
        return sigma0_ == 0.0 ? (*fn_)(t) : (*fn_)(t) * std::pow(t, -sigma0_);
      case Kind::sampled:
        return interpolate(t);
    }
    return 0.0;
  }

  // Sample range for tabulated functions; (0, inf) otherwise.
  double upper() const { return kind_ == Kind::sampled ? tab_->t.back() : INFINITY; }

 private:
  enum class Kind { zero, callable, sampled };
  struct Table {
    std::vector<double> t, g;
  };

  static constexpr size_t kStencil = 6;

  static void check_sigma0(double s) {
    if (!(s > -1.0 && s <= 0.0)) throw DomainError("TimeFunction: sigma0 must lie in (-1, 0]");
  }

  double interpolate(double x) const {
    const auto& t = tab_->t;
    const auto& g = tab_->g;
    const size_t n = t.size();
    if (!(x > 0)) throw DomainError("TimeFunction: evaluation requires t > 0");
    if (x > t.back() + 0.01 * (t.back() - t.front()))
      throw DomainError("TimeFunction: evaluation beyond the sample table");
    // Lagrange through kStencil consecutive nodes around x, clamped at the ends.
    const size_t w = std::min(kStencil, n), i = std::upper_bound(t.begin(), t.end(), x) - t.begin();
    const size_t j = std::min(i < w / 2 ? 0 : i - w / 2, n - w);
    double sum = 0.0;
    for (size_t k = j; k < j + w; ++k) {
      double l = 1.0;
      for (size_t m = j; m < j + w; ++m)
        if (m != k) l *= (x - t[m]) / (t[k] - t[m]);
      sum += l * g[k];
    }
    return sum;
  }

  Kind kind_ = Kind::zero;
  std::shared_ptr<std::function<double(double)>> fn_;
  std::shared_ptr<const Table> tab_;
  double sigma0_ = 0.0;
};

// scale * t^{sigma-1} E^{weight}_{alpha,sigma}(delta t^alpha).
struct MlPower {
  double alpha = 0.7;
  double delta = -1.0;
  double sigma = 1.0;
  double weight = 0.0;
  double scale = 1.0;

  // t^{sigma-1} written in this family.
  static MlPower power(double sigma, double alpha, double delta) { return {alpha, delta, sigma, 0.0, std::tgamma(sigma)}; }

  double operator()(double t, const SeriesControl& c = {}) const {
    if (!(t > 0)) throw DomainError("MlPower: t must be positive");
    if (scale == 0.0) return 0.0;
    return scale * std::pow(t, sigma - 1.0) * prabhakar_e(alpha, sigma, weight, delta * std::pow(t, alpha), c);
  }

  // Prabhakar integral with kernel parameters op; requires sigma > 0.
  MlPower integral(const OperatorParams& op) const {
    same_family(op);
    if (!(sigma > 0)) throw DomainError("MlPower: integral rule needs sigma > 0");
    return {alpha, delta, sigma + op.order, weight + op.weight, scale};
  }

  // Riemann-Liouville type derivative d/dt I^{1-order, -weight}.
  MlPower rl_derivative(const OperatorParams& op) const {
    same_family(op);
    if (!(sigma + 1.0 - op.order > 0)) throw DomainError("MlPower: derivative rule needs sigma > order - 1");
    return {alpha, delta, sigma - op.order, weight - op.weight, scale};
  }

  MlPower derivative() const { return {alpha, delta, sigma - 1.0, weight, scale}; }

  TimeFunction as_time_function(const SeriesControl& c = {}) const {
    MlPower self = *this;
    double s0 = std::min(0.0, sigma - 1.0);
    if (!(s0 > -1.0)) throw DomainError("MlPower: sigma must be positive for a TimeFunction");
    return TimeFunction::callable([self, c](double t) { return self(t, c); }, s0);
  }

 private:
  void same_family(const OperatorParams& op) const {
    if (op.alpha != alpha || op.delta != delta) throw DomainError("MlPower: operator alpha/delta differ from the family");
  }
};

// Gamma(sigma) t^{order+sigma-1} E^{weight}_{alpha,order+sigma}(delta t^alpha).
inline double power_rule_integral(double sigma, const OperatorParams& op, double t, const SeriesControl& c = {}) {
  if (!(sigma > 0)) throw DomainError("power_rule_integral: sigma must be positive");
  return MlPower::power(sigma, op.alpha, op.delta).integral(op)(t, c);
}

namespace detail {

// Lower incomplete beta B_x(p, q) for 0 <= x <= 1/2 from
// x^p (1-x)^q / p * 2F1(p+q, 1; p+1; x), whose terms are positive.
inline double inc_beta_lower(double x, double p, double q) {
  if (x == 0.0) return 0.0;
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 2000; ++n) {
    term *= (p + q + n) / (p + 1 + n) * x;
    sum += term;
    if (term < 1e-17 * sum && (p + q + n) * x < (p + 1 + n)) break;
  }
  return std::exp(p * std::log(x) + q * std::log1p(-x)) / p * sum;
}

inline std::vector<double> interp_nodes(int order) {
  if (order == 1) return {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
  const double c = 0.25 * std::sqrt(3.0);
  return {0.5 - c, 0.5, 0.5 + c};
}

// Monomial coefficients in z of the interpolant through (z_j, v_j).
inline std::vector<double> interp_coeffs(const std::vector<double>& z, const std::vector<double>& v) {
  if (z.size() == 2) {
    double b = (v[1] - v[0]) / (z[1] - z[0]);
    return {v[0] - b * z[0], b};
  }
  const double d01 = (v[1] - v[0]) / (z[1] - z[0]), d12 = (v[2] - v[1]) / (z[2] - z[1]);
  const double c2 = (d12 - d01) / (z[2] - z[0]);
  const double c1 = d01 - c2 * (z[0] + z[1]);
  const double c0 = v[0] - z[0] * (c1 + c2 * z[0]);
  return {c0, c1, c2};
}

// Coefficients in y of sum_i a_i ((y - y0)/h)^i.
inline std::vector<double> shift_coeffs(const std::vector<double>& a, double y0, double h) {
  std::vector<double> b(a.size(), 0.0);
  const double r = y0 / h;
  if (a.size() == 2) {
    b[0] = a[0] - a[1] * r;
    b[1] = a[1] / h;
  } else {
    b[0] = a[0] - a[1] * r + a[2] * r * r;
    b[1] = (a[1] - 2 * a[2] * r) / h;
    b[2] = a[2] / (h * h);
  }
  return b;
}

// Interpolation data of g = s^{-sigma0} f on the two-sided graded mesh of
// [0, t]: a polynomial in s on left panels and in u = t - s on right panels.
struct ProductMesh {
  double t = 0;
  double sigma0 = 0;
  std::vector<double> nodes;                  // mesh in s, size 2n+1
  int half = 0;                               // n
  std::vector<std::vector<double>> left_c;    // per left panel, coefficients in s
  std::vector<std::vector<double>> right_c;   // per right panel (ordered by u), coefficients in u
  std::vector<double> u_nodes;                // distances from t, increasing
};

inline ProductMesh build_product_mesh(const TimeFunction& f, double t, double grading, const QuadratureSpec& q) {
  ProductMesh m;
  m.t = t;
  m.sigma0 = f.sigma0();
  m.nodes = graded_mesh(t, q.panels, grading);
  m.half = static_cast<int>(m.nodes.size() - 1) / 2;
  const int n = m.half;
  const std::vector<double> z = interp_nodes(q.interp_order);
  std::vector<double> v(z.size());
  for (int i = 0; i < n; ++i) {
    const double a = m.nodes[i], b = m.nodes[i + 1], h = b - a;
    for (size_t j = 0; j < z.size(); ++j) v[j] = f.smooth(a + h * z[j]);
    m.left_c.push_back(shift_coeffs(interp_coeffs(z, v), a, h));
  }
  m.u_nodes.resize(n + 1);
  // The mesh is symmetric, so distances from t repeat the left nodes.
  for (int i = 0; i <= n; ++i) m.u_nodes[i] = m.nodes[i];
  for (int i = 0; i < n; ++i) {
    const double a = m.u_nodes[i], b = m.u_nodes[i + 1], h = b - a;
    for (size_t j = 0; j < z.size(); ++j) v[j] = f.smooth(t - (a + h * z[j]));
    m.right_c.push_back(shift_coeffs(interp_coeffs(z, v), a, h));
  }
  for (const auto& c : m.left_c)
    for (double x : c)
      if (!std::isfinite(x)) throw QuadratureFailure("prabhakar_integral: non-finite integrand samples");
  for (const auto& c : m.right_c)
    for (double x : c)
      if (!std::isfinite(x)) throw QuadratureFailure("prabhakar_integral: non-finite integrand samples");
  return m;
}

// int_0^t (t-s)^e f(s) ds for the interpolated f, e > -1.
inline double power_moment(const ProductMesh& m, double e) {
  const double t = m.t;
  const int n = m.half;
  const int deg = static_cast<int>(m.left_c.front().size()) - 1;
  CompensatedSum<double> acc;
  // Left half: t^{e+sigma0+j+1} [B(x_b) - B(x_a)].
  for (int j = 0; j <= deg; ++j) {
    const double p = m.sigma0 + j + 1, qq = e + 1;
    const double scale = std::pow(t, e + p);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
      double cur = inc_beta_lower(std::min(0.5, m.nodes[i + 1] / t), p, qq);
      acc.add(m.left_c[i][j] * scale * (cur - prev));
      prev = cur;
    }
  }
  // Right half: t^{e+j+sigma0+1} [B(y_b; e+j+1, sigma0+1) - B(y_a; ...)], y = u/t.
  for (int j = 0; j <= deg; ++j) {
    const double p = e + j + 1, qq = m.sigma0 + 1;
    const double scale = std::pow(t, p + m.sigma0);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
      double cur = inc_beta_lower(std::min(0.5, m.u_nodes[i + 1] / t), p, qq);
      acc.add(m.right_c[i][j] * scale * (cur - prev));
      prev = cur;
    }
  }
  return acc.value();
}

}  // namespace detail

// int_0^t (t-s)^{order-1} E^{weight}_{alpha,order}(delta (t-s)^alpha) f(s) ds.
// order = 0 is read as the identity plus the k >= 1 part of the kernel.
inline double prabhakar_integral(const TimeFunction& f, const OperatorParams& op, double t, const QuadratureSpec& q = {},
                                 const SeriesControl& c = {}) {
  if (!(t > 0) || !std::isfinite(t)) throw DomainError("prabhakar_integral: t must be positive");
  if (!(op.order >= 0)) throw DomainError("prabhakar_integral: order must be non-negative");
  if (!(op.alpha > 0)) throw DomainError("prabhakar_integral: alpha must be positive");
  q.validate();
  if (f.is_zero()) return 0.0;
  const detail::ProductMesh m = detail::build_product_mesh(f, t, q.grading_for(op.order), q);
  CompensatedSum<double> acc;
  detail::TailTracker<double> tail(c);
  int k0 = 0;
  if (op.order == 0.0) {
    acc.add(f(t));
    k0 = 1;
  }
  // c_k = (weight)_k delta^k / (k! Gamma(alpha k + order)), built incrementally.
  double pk = 1.0;
  for (int k = 0; k < c.max_terms; ++k) {
    if (k > 0) pk *= (op.weight + (k - 1)) * op.delta / k;
    if (k < k0) continue;
    double term = 0.0;
    if (pk != 0.0) {
      double ck = pk * rgamma(op.alpha * k + op.order);
      if (ck != 0.0) term = ck * detail::power_moment(m, op.order - 1 + op.alpha * k);
    }
    if (!std::isfinite(term)) throw QuadratureFailure("prabhakar_integral: non-finite kernel moment");
    acc.add(term);
    const bool eligible = k >= k0 + 2 && (op.weight > 0 || k + 1 > -op.weight);
    if (tail.push(std::fabs(term), acc.value(), eligible)) return acc.value();
    if (pk == 0.0 && k >= k0) return acc.value();
  }
  throw NonConvergence("prabhakar_integral: kernel series not converged within max_terms");
}

// Riemann-Liouville type derivative d/dt I^{1-order, -weight} f (order in (0, 1]).
inline double prl_derivative(const TimeFunction& f, const OperatorParams& op, double t, const QuadratureSpec& q = {},
                             const SeriesControl& c = {}) {
  if (!(op.order > 0 && op.order <= 1)) throw DomainError("prl_derivative: order must lie in (0,1]");
  const OperatorParams inner{op.alpha, 1.0 - op.order, -op.weight, op.delta};
  // Step max(1e-5, 1e-4 t), kept below t/100 so that small t stay reachable.
  const double h = std::min(std::max(1e-5, t * 1e-4), t * 1e-2);
  if (!(h > 0) || !(t - h > 0) || !(t + h > t)) throw StepUnderflow("prl_derivative: t too small for the difference step");
  auto I = [&](double s) { return prabhakar_integral(f, inner, s, q, c); };
  const double d1 = (I(t + h) - I(t - h)) / (2 * h);
  const double d2 = (I(t + h / 2) - I(t - h / 2)) / h;
  if (std::fabs(d1 - d2) > c.rel_tol * std::fabs(d2)) return (4 * d2 - d1) / 3;
  return d2;
}

// Caputo type derivative I^{1-order, -weight} f'.
inline double pc_derivative(const TimeFunction& f, const OperatorParams& op, double t, const QuadratureSpec& q = {},
                            const SeriesControl& c = {}) {
  if (!(op.order > 0 && op.order <= 1)) throw DomainError("pc_derivative: order must lie in (0,1]");
  if (f.is_zero()) return 0.0;
  const OperatorParams inner{op.alpha, 1.0 - op.order, -op.weight, op.delta};
  TimeFunction df = TimeFunction::callable([f](double s) {
    const double h = 1e-4 * s;
    return (f(s + h) - f(s - h)) / (2 * h);
  });
  return prabhakar_integral(df, inner, t, q, c);
}

}  // namespace prabgreen
