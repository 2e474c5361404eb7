#pragma once

// Elementary functions dispatched on the working type, so that the series
// kernels can be instantiated for double and for __float128.

#include <quadmath.h>

#include <cmath>
#include <limits>

namespace prabgreen::detail {

using quad = __float128;

template <class Real>
struct real_ops;

template <>
struct real_ops<double> {
  static constexpr double eps = std::numeric_limits<double>::epsilon();
  static double pi() { return 3.14159265358979323846; }
  static double abs(double x) { return std::fabs(x); }
  static double exp(double x) { return std::exp(x); }
  static double log(double x) { return std::log(x); }
  static double pow(double x, double y) { return std::pow(x, y); }
  static double sin(double x) { return std::sin(x); }
  static double floor(double x) { return std::floor(x); }
  static double nearbyint(double x) { return std::nearbyint(x); }
  static double tgamma(double x) { return std::tgamma(x); }
  static bool isfinite(double x) { return std::isfinite(x); }
  // log|Gamma(x)| with the sign of Gamma(x); x must not be a pole.
  static double lgamma(double x, int& sign) {
    double r = ::lgamma_r(x, &sign);
    return r;
  }
  static constexpr double gamma_overflow = 171.0;
};

template <>
struct real_ops<quad> {
  static constexpr quad eps = quad(1) / (quad(1ull << 56) * quad(1ull << 56));
  static quad pi() { return quad(3.141592653589793) + quad(1.2246467991473532e-16); }
  static quad abs(quad x) { return fabsq(x); }
  static quad exp(quad x) { return expq(x); }
  static quad log(quad x) { return logq(x); }
  static quad pow(quad x, quad y) { return powq(x, y); }
  static quad sin(quad x) { return sinq(x); }
  static quad floor(quad x) { return floorq(x); }
  static quad nearbyint(quad x) { return nearbyintq(x); }
  static quad tgamma(quad x) { return tgammaq(x); }
  static bool isfinite(quad x) { return finiteq(x) != 0; }
  static quad lgamma(quad x, int& sign) {
    if (x > 0) {
      sign = 1;
    } else {
      // Gamma alternates sign between consecutive negative integers.
      quad fl = floorq(x);
      long long k = static_cast<long long>(-fl);
      sign = (k % 2 == 1) ? -1 : 1;
    }
    return lgammaq(x);
  }
  static constexpr double gamma_overflow = 1750.0;
};

template <class Real>
bool is_nonpositive_integer(Real x) {
  using O = real_ops<Real>;
  return x <= 0 && O::floor(x) == x;
}

// sin(pi x) with exact argument reduction, zero at integers.
template <class Real>
Real sinpi(Real x) {
  using O = real_ops<Real>;
  Real r = x - 2 * O::nearbyint(x / 2);  // r in [-1, 1]
  if (r == 0 || O::abs(r) == 1) return Real(0);
  if (r > Real(0.5)) r = 1 - r;
  if (r < Real(-0.5)) r = -1 - r;
  return O::sin(O::pi() * r);
}

template <class Real>
Real rgamma_impl(Real x) {
  using O = real_ops<Real>;
  if (is_nonpositive_integer(x)) return Real(0);
  if (x > 0) {
    if (x < Real(O::gamma_overflow)) return 1 / O::tgamma(x);
    int sg = 1;
    return O::exp(-O::lgamma(x, sg));
  }
  // Reflection: 1/Gamma(x) = Gamma(1-x) sin(pi x) / pi.
  Real y = 1 - x;
  Real s = sinpi(x) / O::pi();
  if (y < Real(O::gamma_overflow)) return O::tgamma(y) * s;
  int sg = 1;
  Real lg = O::lgamma(y, sg);
  Real mag = O::exp(lg + O::log(O::abs(s)));
  return s < 0 ? -mag : mag;
}

}  // namespace prabgreen::detail
