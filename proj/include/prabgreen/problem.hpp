#pragma once

// Data of the first initial-boundary value problem on (0,a) x (0,T]:
// boundary values phi0, phi1, initial weight tau and source f.

#include <cmath>
#include <functional>
#include <string>

#include "prabgreen/errors.hpp"
#include "prabgreen/params.hpp"
#include "prabgreen/prabhakar_ops.hpp"

namespace prabgreen {

// Continuous function on [0, a]; an empty function is identically zero.
struct SpaceFunction {
  std::function<double(double)> fn;

  bool is_zero() const { return !fn; }
  double operator()(double x) const { return fn ? fn(x) : 0.0; }
};

// Field g(t, x) with g ~ t^{sigma0} as t -> 0 for every fixed x; an empty
// function is identically zero.
struct SpaceTimeFunction {
  std::function<double(double, double)> fn;
  double sigma0 = 0.0;

  bool is_zero() const { return !fn; }
  double operator()(double t, double x) const { return fn ? fn(t, x) : 0.0; }

  TimeFunction at(double x) const {
    if (!fn) return TimeFunction::zero();
    auto g = fn;
    return TimeFunction::callable([g, x](double t) { return g(t, x); }, sigma0);
  }
};

struct ProblemData {
  FracParams p;
  Domain dom;
  TimeFunction phi0, phi1;
  SpaceFunction tau;
  SpaceTimeFunction f;

  bool is_zero() const { return phi0.is_zero() && phi1.is_zero() && tau.is_zero() && f.is_zero(); }

  void validate() const {
    p.validate();
    dom.validate();
    if (!f.is_zero() && !(f.sigma0 > -1.0 && f.sigma0 <= 0.0))
      throw DomainError("ProblemData: source sigma0 must lie in (-1, 0]");
  }
};

// Limit of I^{1-beta,-gamma} phi as t -> 0, from t = 2^-16, 2^-18, 2^-20
// and Aitken extrapolation.
inline double weighted_initial_limit(const TimeFunction& phi, const FracParams& p, const QuadratureSpec& q = {},
                                     const SeriesControl& c = {}) {
  if (phi.is_zero()) return 0.0;
  const OperatorParams op{p.alpha, 1.0 - p.beta, -p.gamma, p.delta};
  const double v0 = prabhakar_integral(phi, op, std::ldexp(1.0, -16), q, c);
  const double v1 = prabhakar_integral(phi, op, std::ldexp(1.0, -18), q, c);
  const double v2 = prabhakar_integral(phi, op, std::ldexp(1.0, -20), q, c);
  const double d1 = v1 - v0, d2 = v2 - v1, den = d2 - d1;
  if (std::fabs(den) <= 1e-14 * (std::fabs(v2) + std::fabs(d2)) || std::fabs(d2) >= std::fabs(d1)) return v2;
  return v2 - d2 * d2 / den;
}

// Corner conditions lim I^{1-beta,-gamma} phi0 = tau(0) and the same for phi1
// and tau(a); throws IncompatibleData beyond tol (1 + |tau|).
inline void check_compatibility(const ProblemData& d, double tol = 1e-3, const QuadratureSpec& q = {},
                                const SeriesControl& c = {}) {
  auto check = [&](const TimeFunction& phi, double x, const char* name) {
    const double lim = weighted_initial_limit(phi, d.p, q, c);
    const double tv = d.tau(x);
    if (!(std::fabs(lim - tv) <= tol * (1.0 + std::fabs(tv))))
      throw IncompatibleData(std::string("ProblemData: corner condition fails at ") + name + ": limit " +
                             std::to_string(lim) + " vs tau " + std::to_string(tv));
  };
  check(d.phi0, 0.0, "x=0");
  check(d.phi1, d.dom.a, "x=a");
}

}  // namespace prabgreen
