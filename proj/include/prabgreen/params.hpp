#pragma once

#include <cmath>

#include "prabgreen/errors.hpp"

namespace prabgreen {

// Order parameters (alpha, beta, gamma, delta) of the Prabhakar operators.
// beta1 and gamma1 are the half-order values and are always derived.
struct FracParams {
  double alpha = 0.7;
  double beta = 0.9;
  double gamma = 0.5;
  double delta = -1.0;

  double beta1() const { return beta / 2; }
  double gamma1() const { return gamma / 2; }

  void validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma) || !std::isfinite(delta))
      throw DomainError("FracParams: non-finite parameter");
    if (!(alpha > 0)) throw DomainError("FracParams: alpha must be positive");
    if (!(beta > 0 && beta <= 1)) throw DomainError("FracParams: beta must lie in (0,1]");
  }
};

// Quadruple (alpha, order, weight, delta) selecting one Prabhakar integral
// kernel t^{order-1} E^{weight}_{alpha,order}(delta t^alpha).
struct OperatorParams {
  double alpha = 0.7;
  double order = 0.9;
  double weight = 0.5;
  double delta = -1.0;

  static OperatorParams full(const FracParams& p) { return {p.alpha, p.beta, p.gamma, p.delta}; }
  static OperatorParams half(const FracParams& p) { return {p.alpha, p.beta1(), p.gamma1(), p.delta}; }
};

struct Domain {
  double a = 1.0;
  double T = 1.0;

  void validate() const {
    if (!(std::isfinite(a) && a > 0)) throw DomainError("Domain: a must be positive and finite");
    if (!(std::isfinite(T) && T > 0)) throw DomainError("Domain: T must be positive and finite");
  }
};

}  // namespace prabgreen
