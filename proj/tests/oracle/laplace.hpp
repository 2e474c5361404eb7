#pragma once

// Fixed-Talbot Laplace inversion (Abate and Valko) in long double, used as an
// oracle independent of the library's contour and series code.

#include <cmath>
#include <complex>

namespace oracle {

using cld = std::complex<long double>;

template <class F>
long double fixed_talbot(F&& transform, long double t, int M = 36) {
  const long double pi = 3.141592653589793238462643383279502884L;
  const long double r = 2.0L * M / (5.0L * t);
  long double sum = 0.5L * std::real(transform(cld(r, 0)) * std::exp(r * t));
  for (int k = 1; k < M; ++k) {
    long double th = k * pi / M;
    long double cot = std::cos(th) / std::sin(th);
    cld s(r * th * cot, r * th);
    long double sig = th + (th * cot - 1) * cot;
    sum += std::real(std::exp(t * s) * transform(s) * cld(1, sig));
  }
  return r / M * sum;
}

struct Transform {
  long double alpha, beta1, gamma1, delta;

  cld one_minus(const cld& s) const { return 1.0L - delta * std::pow(s, -alpha); }
  cld lambda(const cld& s) const { return std::pow(s, beta1) * std::pow(one_minus(s), gamma1); }
};

// K_{mu,nu}(t,x) by inversion of s^{-mu} (1 - delta s^{-alpha})^{-nu} exp(-x Lambda(s)).
inline double kernel_laplace(double alpha, double beta1, double gamma1, double delta, double mu, double nu,
                             double t, double x) {
  Transform tr{alpha, beta1, gamma1, delta};
  auto F = [&](const cld& s) {
    return std::pow(s, (long double)-mu) * std::pow(tr.one_minus(s), (long double)-nu) *
           std::exp(-(long double)x * tr.lambda(s));
  };
  return static_cast<double>(fixed_talbot(F, t));
}

// Time factor of the m-th sine mode: inverse transform of 1/(Lambda^2 + lambda_m).
inline double spectral_mode(double alpha, double beta, double gamma, double delta, double lambda_m, double t) {
  Transform tr{alpha, beta / 2, gamma / 2, delta};
  auto F = [&](const cld& s) {
    cld L = tr.lambda(s);
    return 1.0L / (L * L + (long double)lambda_m);
  };
  return static_cast<double>(fixed_talbot(F, t));
}

}  // namespace oracle
