#pragma once

// Talbot-contour inversion of the kernel-family transform
//   F(s) = s^{-mu} (1 - delta s^{-alpha})^{-nu} exp(-x Lambda(s)),
//   Lambda(s) = s^{beta1} (1 - delta s^{-alpha})^{gamma1},
// on the contour of Weideman (2006) with optimized parameters.

#include <cmath>
#include <complex>

#include "prabgreen/params.hpp"

namespace prabgreen::detail {

struct TalbotInverter {
  double alpha, beta1, gamma1, delta;
  double shift = 0.0;  // moves the contour right of branch points off the negative axis

  explicit TalbotInverter(const FracParams& p)
      : alpha(p.alpha), beta1(p.beta1()), gamma1(p.gamma1()), delta(p.delta) {
    // 1 - delta s^{-alpha} vanishes on the principal sheet when delta > 0, or
    // when alpha > 1 for delta < 0.
    if (delta > 0 || (delta < 0 && alpha > 1)) shift = 1.5 * std::pow(std::fabs(delta), 1.0 / alpha);
  }

  // Contour data for fixed (t, mu, nu, N); the x dependence stays separate.
  struct Nodes {
    static constexpr int kMax = 32;  // half of the largest supported N
    int count = 0;
    double scale = 0.0;  // 2 / N
    std::complex<double> base[kMax], lam[kMax], ds[kMax];
  };

  Nodes nodes(double t, double mu, double nu, int N) const {
    using cd = std::complex<double>;
    constexpr double pi = 3.14159265358979323846;
    Nodes r;
    if (N < 2 || N > 2 * Nodes::kMax || N % 2) N = 32;
    const double lam = N / t;
    r.scale = 2.0 / N;
    // The integrand is conjugate-symmetric, so only theta > 0 is summed.
    for (int k = N / 2; k < N; ++k) {
      const double th = -pi + (k + 0.5) * 2 * pi / N;
      const double cotv = 1.0 / std::tan(0.6407 * th);
      const cd s = shift + lam * cd(-0.6122 + 0.5017 * th * cotv, 0.2645 * th);
      const double dA = 0.5017 * (cotv - 0.6407 * th * (1 + cotv * cotv));
      const cd ls = std::log(s);
      const cd l1 = delta == 0.0 ? cd(0.0) : std::log(1.0 - delta * std::exp(-alpha * ls));
      r.base[r.count] = -mu * ls - nu * l1 + s * t;
      r.lam[r.count] = std::exp(beta1 * ls + gamma1 * l1);
      r.ds[r.count] = lam * cd(dA, 0.2645);
      ++r.count;
    }
    return r;
  }

  static double sum(const Nodes& n, double x) {
    double acc = 0.0;
    for (int k = 0; k < n.count; ++k) {
      const std::complex<double> lf = x != 0.0 ? n.base[k] - x * n.lam[k] : n.base[k];
      acc += (std::exp(lf) * n.ds[k]).imag();
    }
    return n.scale * acc;
  }

  double invert(double t, double x, double mu, double nu, int N) const { return sum(nodes(t, mu, nu, N), x); }

  // Saddle-point size estimate log(e^{st} F(s)) minimized over real s; used
  // to skip kernel evaluations that are negligible.
  double log_size(double t, double x, double mu, double nu) const {
    const double smin = shift > 0 ? shift * 1.01 : 0.0;
    auto v = [&](double s) {
      double q = 1.0 - delta * std::pow(s, -alpha);
      if (!(q > 0)) return double(INFINITY);
      return s * t - mu * std::log(s) - nu * std::log(q) - x * std::pow(s, beta1) * std::pow(q, gamma1);
    };
    // Coarse grid around the saddle of s t - x s^beta1, then one refinement.
    double c = std::log(std::max({std::pow(beta1 * x / t, 1.0 / (1.0 - beta1)), 1e-3 / t, smin}));
    double best = INFINITY, arg = c;
    for (int pass = 0; pass < 2; ++pass) {
      const double h = pass == 0 ? 0.7 : 0.12;
      const double c0 = arg;
      for (int i = -6; i <= 6; ++i) {
        double ls = c0 + h * i;
        double s = std::exp(ls);
        if (s <= smin) continue;
        double val = v(s);
        if (val < best) best = val, arg = ls;
      }
    }
    return best;
  }
};

}  // namespace prabgreen::detail
