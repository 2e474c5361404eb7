#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "prabgreen/detail/real.hpp"
#include "prabgreen/errors.hpp"

namespace prabgreen {

// Working precision used when a series cancels badly.
enum class Precision {
  standard,  // double, with __float128 re-evaluation past the condition limit
  extended,  // __float128 throughout
};

// Truncation policy shared by every infinite series and image sum.
struct SeriesControl {
  double abs_tol = 1e-30;
  double rel_tol = 1e-16;
  int max_terms = 600;
  int tail_run = 3;
  int max_images = 8;
  Precision precision = Precision::standard;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0) || max_terms < 1 || tail_run < 1 || max_images < 1)
      throw DomainError("SeriesControl: tolerances must be positive and caps at least 1");
  }
};

// Condition estimate sum|term| / |sum| above which a double sum is redone in quad.
inline constexpr double kCancellationLimit = 1e6;

struct SeriesResult {
  double value = 0.0;
  double bound = 0.0;      // truncation plus rounding estimate
  double abs_sum = 0.0;    // sum of term magnitudes
  int terms = 0;
  bool extended = false;   // evaluated in __float128

  double condition() const {
    if (abs_sum == 0.0) return 1.0;
    return value == 0.0 ? INFINITY : abs_sum / std::fabs(value);
  }
};

// Neumaier compensated accumulator.
template <class Real>
struct CompensatedSum {
  Real sum{0};
  Real comp{0};
  Real abs_sum{0};

  void add(Real x) {
    using O = detail::real_ops<Real>;
    Real t = sum + x;
    if (O::abs(sum) >= O::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
    abs_sum += O::abs(x);
  }
  Real value() const { return sum + comp; }
};

inline double rgamma(double x) { return detail::rgamma_impl(x); }

inline double pochhammer(double a, int k) {
  if (k < 0) throw DomainError("pochhammer: negative k");
  double r = 1.0;
  for (int i = 0; i < k; ++i) {
    double f = a + i;
    if (f == 0.0) return 0.0;
    r *= f;
  }
  return r;
}

namespace detail {

// Tail bookkeeping for a sequence of term groups (single terms or E12 frontiers).
template <class Real>
class TailTracker {
 public:
  explicit TailTracker(const SeriesControl& c) : c_(c) {}

  // Returns true once tail_run consecutive groups fall below the cutoff.
  bool push(Real group_mag, Real partial, bool eligible) {
    using O = real_ops<Real>;
    Real cut = std::max<Real>(Real(c_.abs_tol), Real(c_.rel_tol) * O::abs(partial));
    if (eligible && group_mag <= cut)
      ++run_;
    else
      run_ = 0;
    recent_ = run_ <= 1 ? group_mag : std::max(recent_, group_mag);
    prev_ = last_;
    last_ = group_mag;
    return run_ >= c_.tail_run;
  }

  // Estimate of the discarded tail: the recent magnitudes times a ratio factor.
  Real tail() const {
    Real factor = 2;
    if (prev_ > 0 && last_ < prev_) {
      Real r = last_ / prev_;
      if (r < Real(0.5)) factor = 1 + r / (1 - r);
    }
    return factor * recent_;
  }

 private:
  const SeriesControl& c_;
  int run_ = 0;
  Real recent_{0};
  Real last_{0};
  Real prev_{0};
};

template <class Real>
SeriesResult finish(const CompensatedSum<Real>& acc, const TailTracker<Real>& tail, int terms) {
  using O = real_ops<Real>;
  SeriesResult r;
  Real v = acc.value();
  r.value = static_cast<double>(v);
  r.abs_sum = static_cast<double>(acc.abs_sum);
  r.bound = static_cast<double>(tail.tail() + 4 * O::eps * acc.abs_sum) +
            std::numeric_limits<double>::epsilon() * std::fabs(r.value);
  r.terms = terms;
  r.extended = !std::is_same_v<Real, double>;
  return r;
}

// Runs fn<double>, and fn<quad> when the double sum is ill-conditioned or
// extended precision is requested.
template <class Fn>
SeriesResult with_fallback(const SeriesControl& c, Fn&& fn) {
  if (c.precision == Precision::extended) return fn.template operator()<quad>();
  SeriesResult r = fn.template operator()<double>();
  if (r.condition() > kCancellationLimit) return fn.template operator()<quad>();
  return r;
}

// Product of gamma-function factors tracked as mantissa and log-scale.
template <class Real>
struct GammaProduct {
  Real mant{1};
  Real lsum{0};

  void mul_gamma(Real a) {
    using O = real_ops<Real>;
    if (a > 0 && a < Real(150)) {
      mant *= O::tgamma(a);
    } else {
      int sg = 1;
      lsum += O::lgamma(a, sg);
      mant *= sg;
    }
  }
  void div_gamma(Real b) {
    using O = real_ops<Real>;
    if (is_nonpositive_integer(b)) {
      mant = 0;
      return;
    }
    if (b > 0 && b < Real(150)) {
      mant /= O::tgamma(b);
    } else {
      int sg = 1;
      lsum -= O::lgamma(b, sg);
      mant *= sg;
    }
  }
  void mul_pow(Real x, int n) {
    using O = real_ops<Real>;
    if (n == 0) return;
    if (x == 0) {
      mant = 0;
      return;
    }
    if (x < 0 && (n % 2 == 1)) mant = -mant;
    lsum += n * O::log(O::abs(x));
  }
  Real value() const {
    using O = real_ops<Real>;
    if (mant == 0) return Real(0);
    return mant * O::exp(lsum);
  }
};

template <class Real>
SeriesResult prabhakar_sum(double alpha, double beta, double gamma, double z, const SeriesControl& c) {
  using O = real_ops<Real>;
  const Real a = alpha, b = beta, g = gamma, zz = z;
  int min_terms = 1;
  if (beta <= 0) min_terms = static_cast<int>(std::floor(-beta / alpha)) + 2;
  if (gamma < 0) min_terms = std::max(min_terms, static_cast<int>(std::ceil(-gamma)) + 1);

  CompensatedSum<Real> acc;
  TailTracker<Real> tail(c);
  // p_k = (gamma)_k z^k / k!, kept directly until it gets large, then in logs.
  Real p = 1;
  bool logmode = false;
  Real lp = 0;
  int sp = 1;
  for (int k = 0; k < c.max_terms; ++k) {
    if (k > 0) {
      Real f = (g + (k - 1)) * zz / k;
      if (!logmode) {
        p *= f;
        if (O::abs(p) > Real(1e250)) {
          logmode = true;
          sp = p < 0 ? -1 : 1;
          lp = O::log(O::abs(p));
        }
      } else {
        if (f == 0) {
          p = 0;
          logmode = false;
        } else {
          lp += O::log(O::abs(f));
          if (f < 0) sp = -sp;
        }
      }
    }
    Real arg = a * k + b;
    Real term;
    if (!logmode) {
      term = p == 0 ? Real(0) : p * rgamma_impl(arg);
    } else if (is_nonpositive_integer(arg)) {
      term = 0;
    } else {
      int sg = 1;
      Real lg = O::lgamma(arg, sg);
      term = sp * sg * O::exp(lp - lg);
    }
    if (!O::isfinite(term)) throw NonConvergence("prabhakar_e: term overflow");
    acc.add(term);
    if (tail.push(O::abs(term), acc.value(), k + 1 >= min_terms)) return finish(acc, tail, k + 1);
  }
  throw NonConvergence("prabhakar_e: tail criterion not met within max_terms");
}

template <class Real>
SeriesResult wright_sum(double beta, double delta1, double z, const SeriesControl& c) {
  using O = real_ops<Real>;
  CompensatedSum<Real> acc;
  TailTracker<Real> tail(c);
  Real p = 1;  // z^n / n!
  const Real zz = z, b = beta, d = delta1;
  // Reciprocal gammas at negative arguments grow like Gamma(1 + beta n); the
  // first few terms can vanish at poles, so require a short warm-up.
  const int min_terms = 2 + static_cast<int>(std::ceil(std::max(0.0, delta1) / beta));
  for (int n = 0; n < c.max_terms; ++n) {
    if (n > 0) p *= zz / n;
    Real term = p == 0 ? Real(0) : p * rgamma_impl(d - b * n);
    if (!O::isfinite(term)) throw NonConvergence("wright_e: term overflow");
    acc.add(term);
    if (tail.push(O::abs(term), acc.value(), n + 1 >= min_terms)) return finish(acc, tail, n + 1);
  }
  throw NonConvergence("wright_e: tail criterion not met within max_terms");
}

}  // namespace detail

// Three-parameter Mittag-Leffler (Prabhakar) function with truncation data.
inline SeriesResult prabhakar_e_series(double alpha, double beta, double gamma, double z,
                                       const SeriesControl& c = {}) {
  if (!(alpha > 0)) throw DomainError("prabhakar_e: alpha must be positive");
  if (!std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(z))
    throw DomainError("prabhakar_e: non-finite argument");
  return detail::with_fallback(c, [&]<class Real>() {
    return detail::prabhakar_sum<Real>(alpha, beta, gamma, z, c);
  });
}

inline double prabhakar_e(double alpha, double beta, double gamma, double z, const SeriesControl& c = {}) {
  return prabhakar_e_series(alpha, beta, gamma, z, c).value;
}

// Wright-type function sum_n z^n / (n! Gamma(delta1 - beta n)).
inline SeriesResult wright_e_series(double beta, double delta1, double z, const SeriesControl& c = {}) {
  if (!(beta > 0 && beta < 1)) throw DomainError("wright_e: beta must lie in (0,1)");
  if (!std::isfinite(delta1) || !std::isfinite(z)) throw DomainError("wright_e: non-finite argument");
  return detail::with_fallback(c, [&]<class Real>() { return detail::wright_sum<Real>(beta, delta1, z, c); });
}

inline double wright_e(double beta, double delta1, double z, const SeriesControl& c = {}) {
  return wright_e_series(beta, delta1, z, c).value;
}

// Parameters of the two-variable series
//   sum_{n,m} G(a1 n + b1 m + d1) x^n y^m /
//             [G(a2 n + b2 m + d2) G(a3 n + d3) G(a4 n + d4) G(b3 m + d5)].
struct E12Params {
  double a1 = 0, b1 = 0, d1 = 0;
  double a2 = 0, b2 = 0, d2 = 0;
  double a3 = 0, d3 = 0;
  double a4 = 0, d4 = 0;
  double b3 = 0, d5 = 0;

  double delta1() const { return a2 + a3 + a4 - a1; }
  double delta2() const { return b2 + b3 - b1; }
  bool convergent() const { return delta1() > 0 && delta2() > 0; }
};

namespace detail {

template <class Real>
Real e12_term(const E12Params& p, int n, int m, Real x, Real y) {
  const Real A = Real(p.a1) * n + Real(p.b1) * m + Real(p.d1);
  const Real den[4] = {Real(p.a2) * n + Real(p.b2) * m + Real(p.d2), Real(p.a3) * n + Real(p.d3),
                       Real(p.a4) * n + Real(p.d4), Real(p.b3) * m + Real(p.d5)};
  GammaProduct<Real> g;
  g.mul_pow(x, n);
  g.mul_pow(y, m);
  if (g.mant == 0) return Real(0);
  int paired = -1;
  if (is_nonpositive_integer(A)) {
    // Gamma(A)/Gamma(B) with both at poles and A - B a non-negative integer
    // is the limit (B)_{A-B}.
    for (int j = 0; j < 4; ++j) {
      Real d = A - den[j];
      if (is_nonpositive_integer(den[j]) && d >= 0 && real_ops<Real>::floor(d) == d) {
        paired = j;
        break;
      }
    }
    if (paired < 0) {
      bool vanishes = false;
      for (int j = 0; j < 4; ++j) vanishes = vanishes || is_nonpositive_integer(den[j]);
      if (vanishes) return Real(0);
      throw InvalidTerm("e12: numerator gamma pole at (n,m)=(" + std::to_string(n) + "," +
                        std::to_string(m) + ") with non-vanishing denominator");
    }
    Real B = den[paired];
    int len = static_cast<int>(A - B);
    for (int i = 0; i < len; ++i) g.mant *= (B + i);
  } else {
    g.mul_gamma(A);
  }
  for (int j = 0; j < 4; ++j)
    if (j != paired) g.div_gamma(den[j]);
  return g.value();
}

template <class Real>
SeriesResult e12_sum(const E12Params& p, double x, double y, const SeriesControl& c) {
  using O = real_ops<Real>;
  CompensatedSum<Real> acc;
  TailTracker<Real> tail(c);
  const Real xx = x, yy = y;
  // Factors depending on n alone or m alone are cached per index.
  std::vector<GammaProduct<Real>> row, col;
  auto row_at = [&](int n) -> const GammaProduct<Real>& {
    while (static_cast<int>(row.size()) <= n) {
      int k = static_cast<int>(row.size());
      GammaProduct<Real> g;
      g.mul_pow(xx, k);
      g.div_gamma(Real(p.a3) * k + Real(p.d3));
      g.div_gamma(Real(p.a4) * k + Real(p.d4));
      row.push_back(g);
    }
    return row[n];
  };
  auto col_at = [&](int m) -> const GammaProduct<Real>& {
    while (static_cast<int>(col.size()) <= m) {
      int k = static_cast<int>(col.size());
      GammaProduct<Real> g;
      g.mul_pow(yy, k);
      g.div_gamma(Real(p.b3) * k + Real(p.d5));
      col.push_back(g);
    }
    return col[m];
  };
  auto term = [&](int n, int m) -> Real {
    const Real A = Real(p.a1) * n + Real(p.b1) * m + Real(p.d1);
    if (is_nonpositive_integer(A)) return e12_term<Real>(p, n, m, xx, yy);
    const GammaProduct<Real>& r = row_at(n);
    const GammaProduct<Real>& q = col_at(m);
    if (r.mant == 0 || q.mant == 0) return Real(0);
    GammaProduct<Real> g;
    g.mant = r.mant * q.mant;
    g.lsum = r.lsum + q.lsum;
    g.div_gamma(Real(p.a2) * n + Real(p.b2) * m + Real(p.d2));
    if (g.mant == 0) return Real(0);
    g.mul_gamma(A);
    return g.value();
  };
  // Pole patterns in the leading rows can give spuriously small frontiers.
  const int min_frontiers = 4;
  for (int L = 0; L < c.max_terms; ++L) {
    Real fmax = 0;
    auto add = [&](int n, int m) {
      Real t = term(n, m);
      if (!O::isfinite(t)) throw NonConvergence("e12: term overflow");
      acc.add(t);
      fmax = std::max(fmax, O::abs(t));
    };
    for (int m = 0; m <= L; ++m) add(L, m);
    for (int n = 0; n < L; ++n) add(n, L);
    if (tail.push(fmax, acc.value(), L + 1 >= min_frontiers)) return finish(acc, tail, L + 1);
  }
  throw NonConvergence("e12: tail criterion not met within max_terms frontiers");
}

}  // namespace detail

inline SeriesResult e12_series(const E12Params& p, double x, double y, const SeriesControl& c = {}) {
  if (!p.convergent()) throw DivergentParameters("e12: requires delta1 > 0 and delta2 > 0");
  return detail::with_fallback(c, [&]<class Real>() { return detail::e12_sum<Real>(p, x, y, c); });
}

inline double e12(const E12Params& p, double x, double y, const SeriesControl& c = {}) {
  return e12_series(p, x, y, c).value;
}

}  // namespace prabgreen
