#pragma once

// Kernel family
//   K_{mu,nu}(t,x) = sum_n (-x)^n/n! t^{mu - beta1 n - 1} E^{nu - gamma1 n}_{alpha, mu - beta1 n}(delta t^alpha)
// with omega = K_{0,0} and the half kernel K_{beta1,gamma1} behind W, plus
// the image-sum Green's function and its s-derivative.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "prabgreen/contour.hpp"
#include "prabgreen/errors.hpp"
#include "prabgreen/params.hpp"
#include "prabgreen/special.hpp"

namespace prabgreen {

struct KernelValue {
  double value = 0.0;
  double bound = 0.0;
};

// Which one-sided limit green_s took at s == x.
enum class Side { interior, left, right };

struct GreenSValue {
  double value = 0.0;
  double bound = 0.0;
  Side side = Side::interior;
};

namespace detail {

// Condition limit for accepting the double series of the kernel family;
// beyond it the contour inversion is more accurate.
inline constexpr double kKernelSeriesCondition = 1e3;
// Series is attempted for Z = x t^{-beta1} up to these values; in double
// precision its condition number passes 1e3 near Z = 4.
inline constexpr double kKernelSeriesZ = 8.0;
inline constexpr double kKernelSeriesZDouble = 4.0;
// Values below this fraction of t^{mu-1} are returned as zero.
inline constexpr double kNegligible = 1e-32;

template <class Real>
struct KernelTable {
  std::vector<std::vector<Real>> rows;  // rows[n][k] = c_{n,k}
  int pole_rows = 0;                    // rows that may vanish identically
};

template <class Real>
KernelTable<Real> build_kernel_table(const FracParams& p, double mu, double nu, double ymax, double zlim, int cap) {
  using O = real_ops<Real>;
  const Real al = p.alpha, b1 = p.beta1(), g1 = p.gamma1(), de = p.delta;
  KernelTable<Real> tab;
  // Row n behaves like Z^n Gamma(1 + beta1 n)/n!, which decays once n is large.
  Real rn = 1;  // (-1)^n / n!
  Real row_peak = 0;
  int small_rows = 0;
  const Real zmax = zlim;
  Real zn = 1;
  for (int n = 0; n < cap; ++n) {
    if (n > 0) {
      rn = -rn / n;
      zn *= zmax;
    }
    if (O::abs(rn) < Real(1e-290)) break;
    std::vector<Real> row;
    Real pk = 1;  // (nu - gamma1 n)_k delta^k / k!
    Real mx = 0;
    int run = 0;
    const Real base = Real(mu) - b1 * n;
    const Real up = Real(nu) - g1 * n;
    for (int k = 0; k < 4000; ++k) {
      if (k > 0) pk *= (up + (k - 1)) * de / k;
      Real c = rn * pk * rgamma_impl(al * k + base);
      row.push_back(c);
      Real m = O::abs(c) * O::pow(Real(ymax), Real(k));
      mx = std::max(mx, m);
      bool past_poles = al * k + base > 1 && up + k > 0;
      if (past_poles && m <= Real(1e-20) * mx) {
        if (++run >= 3) break;
      } else {
        run = 0;
      }
      if (pk == 0 && past_poles) break;
    }
    tab.rows.push_back(std::move(row));
    Real rowmag = mx * zn;
    row_peak = std::max(row_peak, rowmag);
    if (mx == 0) tab.pole_rows = n + 1;
    if (n > tab.pole_rows + 2 && rowmag <= Real(1e-22) * row_peak) {
      if (++small_rows >= 3) break;
    } else {
      small_rows = 0;
    }
  }
  return tab;
}

template <class Real>
struct SeriesEval {
  double value;
  double abs_sum;
  double tail;
};

// Row sums r_n = sum_k c_{n,k} Y^k and their absolute majorants.
template <class Real>
void kernel_rows(const KernelTable<Real>& tab, Real Y, std::vector<Real>& rv, std::vector<Real>& ra) {
  using O = real_ops<Real>;
  const Real ya = O::abs(Y);
  rv.resize(tab.rows.size());
  ra.resize(tab.rows.size());
  for (std::size_t n = 0; n < tab.rows.size(); ++n) {
    const std::vector<Real>& row = tab.rows[n];
    Real v = 0, m = 0;
    for (std::size_t k = row.size(); k-- > 0;) {
      v = v * Y + row[k];
      m = m * ya + O::abs(row[k]);
    }
    rv[n] = v;
    ra[n] = m;
  }
}

// sum_n r_n Z^n, stopped by the tail rule once past the pole rows.
template <class Real>
SeriesEval<Real> sum_kernel_rows(const Real* rv, const Real* ra, std::size_t rows, int pole_rows, Real Z,
                                 const SeriesControl& c) {
  using O = real_ops<Real>;
  CompensatedSum<Real> acc;
  Real zn = 1;
  int run = 0;
  Real last = 0;
  for (std::size_t n = 0; n < rows; ++n) {
    if (n > 0) zn *= Z;
    const Real rowabs = ra[n] * O::abs(zn);
    acc.add(rv[n] * zn);
    acc.abs_sum += rowabs - O::abs(rv[n] * zn);
    last = rowabs;
    Real cut = std::max<Real>(Real(c.abs_tol), Real(c.rel_tol) * O::abs(acc.value()));
    if (static_cast<int>(n) >= pole_rows && rowabs <= cut) {
      if (++run >= c.tail_run) break;
    } else {
      run = 0;
    }
  }
  Real v = acc.value();
  return {static_cast<double>(v), static_cast<double>(acc.abs_sum),
          static_cast<double>(2 * last + 4 * O::eps * acc.abs_sum)};
}

// Same sum with the rows formed on demand, for one-off evaluations.
template <class Real>
SeriesEval<Real> eval_kernel_table(const KernelTable<Real>& tab, Real Z, Real Y, const SeriesControl& c) {
  using O = real_ops<Real>;
  CompensatedSum<Real> acc;
  Real zn = 1;
  int run = 0;
  Real last = 0;
  const Real ya = O::abs(Y);
  for (std::size_t n = 0; n < tab.rows.size(); ++n) {
    if (n > 0) zn *= Z;
    const std::vector<Real>& row = tab.rows[n];
    Real rv = 0, ra = 0;
    for (std::size_t k = row.size(); k-- > 0;) {
      rv = rv * Y + row[k];
      ra = ra * ya + O::abs(row[k]);
    }
    const Real rowabs = ra * O::abs(zn);
    acc.add(rv * zn);
    acc.abs_sum += rowabs - O::abs(rv * zn);
    last = rowabs;
    Real cut = std::max<Real>(Real(c.abs_tol), Real(c.rel_tol) * O::abs(acc.value()));
    if (static_cast<int>(n) >= tab.pole_rows && rowabs <= cut) {
      if (++run >= c.tail_run) break;
    } else {
      run = 0;
    }
  }
  Real v = acc.value();
  return {static_cast<double>(v), static_cast<double>(acc.abs_sum),
          static_cast<double>(2 * last + 4 * O::eps * acc.abs_sum)};
}

}  // namespace detail

// Evaluator for one member K_{mu,nu} of the kernel family on times up to a
// horizon. Immutable after construction and safe to share between threads.
class KernelFamily {
 public:
  KernelFamily(const FracParams& p, double mu, double nu, double horizon, const SeriesControl& c = {})
      : p_(p), mu_(mu), nu_(nu), horizon_(horizon), ctrl_(c), talbot_(p) {
    p.validate();
    c.validate();
    if (!(horizon > 0)) throw DomainError("KernelFamily: horizon must be positive");
    ymax_ = std::pow(horizon, p.alpha);
    zlim_ = c.precision == Precision::extended ? detail::kKernelSeriesZ : detail::kKernelSeriesZDouble;
    const int cap = std::min(c.max_terms, 400);
    if (c.precision == Precision::extended)
      qtab_ = std::make_shared<detail::KernelTable<detail::quad>>(
          detail::build_kernel_table<detail::quad>(p, mu, nu, ymax_, zlim_, cap));
    else
      tab_ = std::make_shared<detail::KernelTable<double>>(
          detail::build_kernel_table<double>(p, mu, nu, ymax_, zlim_, cap));
  }

  const FracParams& params() const { return p_; }
  double mu() const { return mu_; }
  double nu() const { return nu_; }
  double horizon() const { return horizon_; }
  const SeriesControl& control() const { return ctrl_; }
  double series_limit() const { return zlim_; }
  const detail::TalbotInverter& inverter() const { return talbot_; }
  const detail::KernelTable<double>* table() const { return tab_.get(); }

  // Value only; the fast path used inside quadratures.
  double operator()(double t, double x) const { return eval(t, x, false).value; }

  // Value together with an error bound.
  KernelValue eval(double t, double x, bool with_bound = true) const {
    if (!(t > 0) || !std::isfinite(t)) throw DomainError("kernel: t must be positive");
    if (!(x >= 0) || !std::isfinite(x)) throw DomainError("kernel: x must be non-negative");
    const double tb = std::pow(t, -p_.beta1());
    const double Z = x * tb;
    const double scale = std::pow(t, mu_ - 1.0);
    if (Z <= zlim_ && t <= horizon_ * (1 + 1e-12)) {
      const double Y = std::pow(t, p_.alpha);
      if (tab_) {
        auto r = detail::eval_kernel_table<double>(*tab_, Z, Y, ctrl_);
        if (r.abs_sum == 0.0) return {0.0, 0.0};
        if (r.abs_sum <= detail::kKernelSeriesCondition * std::fabs(r.value))
          return {r.value * scale, r.tail * scale};
      } else {
        auto r = detail::eval_kernel_table<detail::quad>(*qtab_, Z, Y, ctrl_);
        if (r.abs_sum == 0.0) return {0.0, 0.0};
        if (r.abs_sum <= 1e18 * std::fabs(r.value)) return {r.value * scale, r.tail * scale};
      }
    }
    if (Z > 4.0) {
      double ls = talbot_.log_size(t, x, mu_, nu_) + std::log(1e3 / t);
      if (ls < std::log(detail::kNegligible * scale)) return {0.0, std::exp(ls)};
    }
    const double v = talbot_.invert(t, x, mu_, nu_, 32);
    if (!std::isfinite(v)) throw NonConvergence("kernel: contour inversion produced a non-finite value");
    if (!with_bound) return {v, 0.0};
    const double v2 = talbot_.invert(t, x, mu_, nu_, 24);
    const double err = std::fabs(v - v2) + 1e-14 * std::fabs(v);
    if (err > 1e-6 * std::max(std::fabs(v), scale))
      throw NonConvergence("kernel: contour inversion did not converge at t=" + std::to_string(t) +
                           " x=" + std::to_string(x));
    return {v, err};
  }

 private:
  FracParams p_;
  double mu_, nu_, horizon_;
  SeriesControl ctrl_;
  detail::TalbotInverter talbot_;
  double ymax_ = 1.0;
  double zlim_ = 0.0;
  std::shared_ptr<const detail::KernelTable<double>> tab_;
  std::shared_ptr<const detail::KernelTable<detail::quad>> qtab_;
};

// K_{mu,nu}(t, .) at one fixed t. The series rows are formed once and the
// contour nodes and negligibility threshold on first use, so one slice is
// not safe to share between threads.
class KernelSlice {
 public:
  KernelSlice(const KernelFamily& fam, double t) : fam_(&fam), t_(t) {
    if (!(t > 0) || !std::isfinite(t)) throw DomainError("kernel: t must be positive");
    tb_ = std::pow(t, -fam.params().beta1());
    scale_ = std::pow(t, fam.mu() - 1.0);
    if (fam.table() && t <= fam.horizon() * (1 + 1e-12)) {
      detail::kernel_rows(*fam.table(), std::pow(t, fam.params().alpha), rv_, ra_);
      series_ = true;
    }
  }

  double t() const { return t_; }
  double operator()(double x) const { return eval(x, false).value; }

  KernelValue eval(double x, bool with_bound = false) const {
    if (!(x >= 0) || !std::isfinite(x)) throw DomainError("kernel: x must be non-negative");
    if (!series_) return fam_->eval(t_, x, with_bound);
    const double Z = x * tb_;
    if (Z <= fam_->series_limit()) {
      auto r = detail::sum_kernel_rows(rv_.data(), ra_.data(), rv_.size(), fam_->table()->pole_rows, Z,
                                       fam_->control());
      if (r.abs_sum == 0.0) return {0.0, 0.0};
      if (r.abs_sum <= detail::kKernelSeriesCondition * std::fabs(r.value))
        return {r.value * scale_, r.tail * scale_};
    }
    if (Z > 4.0 && x >= negligible_from()) return {0.0, detail::kNegligible * scale_};
    if (!n32_) n32_ = std::make_unique<detail::TalbotInverter::Nodes>(
                   fam_->inverter().nodes(t_, fam_->mu(), fam_->nu(), 32));
    const double v = detail::TalbotInverter::sum(*n32_, x);
    if (!std::isfinite(v)) throw NonConvergence("kernel: contour inversion produced a non-finite value");
    if (!with_bound) return {v, 0.0};
    if (!n24_) n24_ = std::make_unique<detail::TalbotInverter::Nodes>(
                   fam_->inverter().nodes(t_, fam_->mu(), fam_->nu(), 24));
    const double err = std::fabs(v - detail::TalbotInverter::sum(*n24_, x)) + 1e-14 * std::fabs(v);
    if (err > 1e-6 * std::max(std::fabs(v), scale_))
      throw NonConvergence("kernel: contour inversion did not converge at t=" + std::to_string(t_) +
                           " x=" + std::to_string(x));
    return {v, err};
  }

 private:
  bool negligible(double x) const {
    const double ls = fam_->inverter().log_size(t_, x, fam_->mu(), fam_->nu()) + std::log(1e3 / t_);
    return ls < std::log(detail::kNegligible * scale_);
  }

  // Smallest x past the series range from which the kernel is negligible;
  // the size estimate decreases in x.
  double negligible_from() const {
    if (xneg_ >= 0) return xneg_;
    double lo = 4.0 / tb_, hi = lo;
    if (negligible(hi)) return xneg_ = hi;
    for (int i = 0; i < 60 && !negligible(hi); ++i) {
      lo = hi;
      hi *= 2;
    }
    if (!negligible(hi)) return xneg_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 40 && hi - lo > 1e-12 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (negligible(mid) ? hi : lo) = mid;
    }
    return xneg_ = hi;
  }

  const KernelFamily* fam_;
  double t_, tb_ = 0.0, scale_ = 0.0;
  bool series_ = false;
  std::vector<double> rv_, ra_;
  mutable double xneg_ = -1.0;
  mutable std::unique_ptr<detail::TalbotInverter::Nodes> n32_, n24_;
};

namespace detail {

// Small cache so that the scalar entry points do not rebuild tables per call.
inline std::shared_ptr<const KernelFamily> cached_family(const FracParams& p, double mu, double nu,
                                                         double horizon, const SeriesControl& c) {
  using Key = std::tuple<double, double, double, double, double, double, double, double, double, int, int, int>;
  static std::mutex mtx;
  static std::map<Key, std::shared_ptr<const KernelFamily>> cache;
  // Round the horizon up to a power of two, and at least 1, so that calls
  // share a table; the series rows stay valid for all shorter times.
  double h = std::exp2(std::ceil(std::log2(std::max(horizon, 1.0))));
  Key key{p.alpha, p.beta, p.gamma, p.delta, mu, nu, h, c.abs_tol, c.rel_tol, c.max_terms, c.tail_run,
          static_cast<int>(c.precision)};
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 64) cache.clear();
  auto fam = std::make_shared<const KernelFamily>(p, mu, nu, h, c);
  cache.emplace(key, fam);
  return fam;
}

}  // namespace detail

inline KernelValue omega_value(double t, double x, const FracParams& p, const SeriesControl& c = {}) {
  if (!(t > 0)) throw DomainError("omega: t must be positive");
  return detail::cached_family(p, 0.0, 0.0, t, c)->eval(t, x);
}

inline double omega(double t, double x, const FracParams& p, const SeriesControl& c = {}) {
  return omega_value(t, x, p, c).value;
}

inline KernelValue w_kernel_value(double dt, double x1, double x2, const FracParams& p,
                                  const SeriesControl& c = {}) {
  if (!(dt > 0)) throw DomainError("w_kernel: dt must be positive");
  if (x1 == x2) return {0.0, 0.0};
  auto fam = detail::cached_family(p, p.beta1(), p.gamma1(), dt, c);
  KernelValue k1 = fam->eval(dt, x1), k2 = fam->eval(dt, x2);
  return {0.5 * (k1.value - k2.value), 0.5 * (k1.bound + k2.bound)};
}

inline double w_kernel(double dt, double x1, double x2, const FracParams& p, const SeriesControl& c = {}) {
  return w_kernel_value(dt, x1, x2, p, c).value;
}

namespace detail {

// Sum of term(n) over n = 0, +-1, +-2, ... The spatial arguments grow with
// |n| and the kernels decay super-geometrically. The cut is relative to the
// largest image, since the images can cancel to zero.
inline constexpr double kImageCapTolerance = 1e-10;

template <class Term>
KernelValue image_sum(Term&& term, const SeriesControl& c) {
  CompensatedSum<double> acc;
  double bound = 0.0;
  KernelValue t0 = term(0);
  acc.add(t0.value);
  bound += t0.bound;
  double last = std::fabs(t0.value);
  double scale = last;
  for (int n = 1; n <= c.max_images; ++n) {
    KernelValue tp = term(n), tm = term(-n);
    acc.add(tp.value);
    acc.add(tm.value);
    bound += tp.bound + tm.bound;
    last = std::fabs(tp.value) + std::fabs(tm.value);
    scale = std::max(scale, last);
    if (last <= std::max(c.abs_tol, c.rel_tol * scale)) return {acc.value(), bound + 2 * last};
  }
  // At the hard cap a remainder far below the sum is reported in the bound.
  if (last > std::max(c.abs_tol, kImageCapTolerance * scale))
    throw NonConvergence("green: image sum not converged within max_images");
  return {acc.value(), bound + 2 * last};
}

}  // namespace detail

// Image-sum Green's function on (0,a) together with its s-derivative.
class GreenFunction {
 public:
  // Smallest t - eta accepted; the kernel grows like (t - eta)^{beta1 - 1}.
  static constexpr double kMinSeparation = 1e-8;

  GreenFunction(const FracParams& p, const Domain& dom, const SeriesControl& c = {}, double horizon = 0.0)
      : p_(p),
        dom_(dom),
        ctrl_(c),
        omega_(std::make_shared<KernelFamily>(p, 0.0, 0.0, horizon > 0 ? horizon : dom.T, c)),
        half_(std::make_shared<KernelFamily>(p, p.beta1(), p.gamma1(), horizon > 0 ? horizon : dom.T, c)) {
    dom.validate();
  }

  const FracParams& params() const { return p_; }
  const Domain& domain() const { return dom_; }
  const SeriesControl& control() const { return ctrl_; }
  const KernelFamily& omega() const { return *omega_; }
  const KernelFamily& half() const { return *half_; }

  double w(double dt, double x1, double x2) const {
    if (x1 == x2) return 0.0;
    return 0.5 * ((*half_)(dt, x1) - (*half_)(dt, x2));
  }

  KernelValue green(double t, double x, double eta, double s) const {
    check(t, x, eta, s);
    if (!(t - eta >= kMinSeparation)) throw DomainError("green: t - eta below 1e-8");
    return green_tau(t - eta, x, s, true);
  }

  GreenSValue green_s(double t, double x, double eta, double s) const {
    check(t, x, eta, s);
    if (!(t - eta >= kMinSeparation)) throw DomainError("green_s: t - eta below 1e-8");
    KernelValue kv = green_s_tau(t - eta, x, s, true);
    Side side = Side::interior;
    if (s == x) side = Side::right;
    return {kv.value, kv.bound, side};
  }

  // G as a function of tau = t - eta > 0, for use inside quadratures.
  KernelValue green_tau(double tau, double x, double s, bool with_bound = false) const {
    if (!(tau > 0)) throw DomainError("green: requires t - eta > 0");
    const double a = dom_.a;
    auto term = [&](int n) {
      double u1 = std::fabs(x - s + 2 * a * n), u2 = std::fabs(x + s + 2 * a * n);
      if (u1 == u2) return KernelValue{0.0, 0.0};
      KernelValue k1 = half_->eval(tau, u1, with_bound), k2 = half_->eval(tau, u2, with_bound);
      return KernelValue{0.5 * (k1.value - k2.value), 0.5 * (k1.bound + k2.bound)};
    };
    return image_sum(term);
  }

  KernelValue green_s_tau(double tau, double x, double s, bool with_bound = false) const {
    if (!(tau > 0)) throw DomainError("green_s: requires t - eta > 0");
    const double a = dom_.a;
    auto sgn = [](double u) { return u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0); };
    auto term = [&](int n) {
      double u1 = x - s + 2 * a * n, u2 = x + s + 2 * a * n;
      KernelValue k1{0.0, 0.0}, k2{0.0, 0.0};
      if (u1 != 0) k1 = omega_->eval(tau, std::fabs(u1), with_bound);
      if (u2 != 0) k2 = omega_->eval(tau, std::fabs(u2), with_bound);
      return KernelValue{0.5 * (sgn(u1) * k1.value + sgn(u2) * k2.value), 0.5 * (k1.bound + k2.bound)};
    };
    return image_sum(term);
  }

 private:
  void check(double t, double x, double eta, double s) const {
    if (!(eta >= 0 && eta < t)) throw DomainError("green: requires 0 <= eta < t");
    if (t > dom_.T * (1 + 1e-12) && t > omega_->horizon()) throw DomainError("green: t beyond horizon");
    if (!(x >= 0 && x <= dom_.a && s >= 0 && s <= dom_.a)) throw DomainError("green: x and s must lie in [0,a]");
  }

  template <class Term>
  KernelValue image_sum(Term&& term) const {
    return detail::image_sum(std::forward<Term>(term), ctrl_);
  }

  FracParams p_;
  Domain dom_;
  SeriesControl ctrl_;
  std::shared_ptr<const KernelFamily> omega_;
  std::shared_ptr<const KernelFamily> half_;
};

// G and G_s at one fixed tau = t - eta, for integrals over space.
class GreenSlice {
 public:
  GreenSlice(const GreenFunction& g, double tau)
      : a_(g.domain().a), ctrl_(g.control()), omega_(g.omega(), tau), half_(g.half(), tau) {}

  double tau() const { return omega_.t(); }
  const KernelSlice& omega() const { return omega_; }
  const KernelSlice& half() const { return half_; }

  double w(double x1, double x2) const {
    if (x1 == x2) return 0.0;
    return 0.5 * (half_(x1) - half_(x2));
  }

  KernelValue green(double x, double s, bool with_bound = false) const {
    check();
    auto term = [&](int n) {
      double u1 = std::fabs(x - s + 2 * a_ * n), u2 = std::fabs(x + s + 2 * a_ * n);
      if (u1 == u2) return KernelValue{0.0, 0.0};
      KernelValue k1 = half_.eval(u1, with_bound), k2 = half_.eval(u2, with_bound);
      return KernelValue{0.5 * (k1.value - k2.value), 0.5 * (k1.bound + k2.bound)};
    };
    return detail::image_sum(term, ctrl_);
  }

  KernelValue green_s(double x, double s, bool with_bound = false) const {
    check();
    auto sgn = [](double u) { return u > 0 ? 1.0 : (u < 0 ? -1.0 : 0.0); };
    auto term = [&](int n) {
      double u1 = x - s + 2 * a_ * n, u2 = x + s + 2 * a_ * n;
      KernelValue k1{0.0, 0.0}, k2{0.0, 0.0};
      if (u1 != 0) k1 = omega_.eval(std::fabs(u1), with_bound);
      if (u2 != 0) k2 = omega_.eval(std::fabs(u2), with_bound);
      return KernelValue{0.5 * (sgn(u1) * k1.value + sgn(u2) * k2.value), 0.5 * (k1.bound + k2.bound)};
    };
    return detail::image_sum(term, ctrl_);
  }

 private:
  void check() const {
    if (!(tau() > 0)) throw DomainError("green: requires t - eta > 0");
  }

  double a_;
  SeriesControl ctrl_;
  KernelSlice omega_, half_;
};

namespace detail {

inline std::shared_ptr<const GreenFunction> cached_green(const FracParams& p, const Domain& dom,
                                                         const SeriesControl& c) {
  using Key = std::tuple<double, double, double, double, double, double, double, double, int, int, int, int>;
  static std::mutex mtx;
  static std::map<Key, std::shared_ptr<const GreenFunction>> cache;
  Key key{p.alpha, p.beta, p.gamma, p.delta, dom.a, dom.T, c.abs_tol, c.rel_tol, c.max_terms, c.tail_run,
          c.max_images, static_cast<int>(c.precision)};
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 32) cache.clear();
  auto g = std::make_shared<const GreenFunction>(p, dom, c);
  cache.emplace(key, g);
  return g;
}

}  // namespace detail

inline KernelValue green_value(double t, double x, double eta, double s, const FracParams& p, const Domain& dom,
                               const SeriesControl& c = {}) {
  return detail::cached_green(p, dom, c)->green(t, x, eta, s);
}

inline double green(double t, double x, double eta, double s, const FracParams& p, const Domain& dom,
                    const SeriesControl& c = {}) {
  return green_value(t, x, eta, s, p, dom, c).value;
}

inline GreenSValue green_s_value(double t, double x, double eta, double s, const FracParams& p, const Domain& dom,
                                 const SeriesControl& c = {}) {
  return detail::cached_green(p, dom, c)->green_s(t, x, eta, s);
}

inline double green_s(double t, double x, double eta, double s, const FracParams& p, const Domain& dom,
                      const SeriesControl& c = {}) {
  return green_s_value(t, x, eta, s, p, dom, c).value;
}

// Green's function summed from the two-variable E12 representation of each
// image term. Terms whose scaled spatial argument exceeds kE12MaxArgument are
// below the series' reach; their W-form magnitude is added to the bound.
inline constexpr double kE12MaxArgument = 10.0;

inline E12Params green_e12_params(const FracParams& p) {
  const double b1 = p.beta1(), g1 = p.gamma1();
  return {-g1, 1.0, g1, -b1, p.alpha, b1, -g1, g1, 1.0, 1.0, 1.0, 1.0};
}

inline E12Params omega_e12_params(const FracParams& p) {
  const double b1 = p.beta1(), g1 = p.gamma1();
  return {-g1, 1.0, 0.0, -b1, p.alpha, 0.0, -g1, 0.0, 1.0, 1.0, 1.0, 1.0};
}

inline KernelValue green_e12_form(double t, double x, double eta, double s, const FracParams& p, const Domain& dom,
                                  const SeriesControl& c = {}) {
  if (!(eta >= 0 && eta < t)) throw DomainError("green: requires 0 <= eta < t");
  const double tau = t - eta;
  if (tau < GreenFunction::kMinSeparation) throw DomainError("green: t - eta below 1e-8");
  const E12Params ep = green_e12_params(p);
  const double tb = std::pow(tau, -p.beta1()), pref = 0.5 * std::pow(tau, p.beta1() - 1.0);
  const double y = p.delta * std::pow(tau, p.alpha);
  auto fam = detail::cached_family(p, p.beta1(), p.gamma1(), t, c);
  auto piece = [&](double u) -> KernelValue {
    const double X = -u * tb;
    if (-X > kE12MaxArgument) return {0.0, 2 * std::fabs(fam->eval(tau, u).value) + fam->eval(tau, u).bound};
    SeriesResult r = e12_series(ep, X, y, c);
    return {2 * pref * r.value, 2 * pref * r.bound};
  };
  CompensatedSum<double> acc;
  double bound = 0.0;
  for (int n = -c.max_images; n <= c.max_images; ++n) {
    double u1 = std::fabs(x - s + 2 * dom.a * n), u2 = std::fabs(x + s + 2 * dom.a * n);
    if (u1 == u2) continue;
    KernelValue k1 = piece(u1), k2 = piece(u2);
    acc.add(0.5 * (k1.value - k2.value));
    bound += 0.5 * (k1.bound + k2.bound);
  }
  return {acc.value(), bound};
}

}  // namespace prabgreen
