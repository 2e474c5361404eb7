#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <memory>

#include "oracle/laplace.hpp"
#include "prabgreen/volterra.hpp"

using namespace prabgreen;

namespace {

const FracParams P{0.7, 0.9, 0.5, -1.0};
const Domain D{1.0, 1.0};
const double PI = 3.14159265358979323846;

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

ProblemData sine_tau() {
  ProblemData d;
  d.p = P;
  d.dom = D;
  d.tau.fn = [](double s) { return std::sin(PI * s); };
  return d;
}

// psi1 for sine tau from the mode expansion
//   -(pi/2) sum_j (-pi^2)^j t^{s_j - 1} E^{w_j}_{alpha, s_j}(delta t^alpha),
// s_j = beta (j+1) + beta1, w_j = gamma (j+1) + gamma1, valid while pi^2 t^beta is moderate.
double psi1_modes(double t) {
  double sum = 0.0, c = -0.5 * PI;
  for (int j = 0; j < 80; ++j) {
    MlPower m{P.alpha, P.delta, P.beta * (j + 1) + P.beta1(), P.gamma * (j + 1) + P.gamma1(), c};
    const double term = m(t);
    sum += term;
    if (j > 5 && std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    c *= -PI * PI;
  }
  return sum;
}

// The same function by inversion of -(pi/2) / (Lambda (Lambda^2 + pi^2)).
double psi1_laplace(double t) {
  const oracle::Transform tr{P.alpha, P.beta1(), P.gamma1(), P.delta};
  auto F = [&](const oracle::cld& s) {
    const oracle::cld L = tr.lambda(s);
    return -0.5L * (long double)PI / (L * (L * L + (long double)(PI * PI)));
  };
  return static_cast<double>(oracle::fixed_talbot(F, t));
}

template <class F>
double gk(F&& f, double lo, double hi) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, 1e-12);
}

class SineTau : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { sol_ = std::make_unique<VolterraSolution>(sine_tau()); }
  static void TearDownTestSuite() { sol_.reset(); }
  static std::unique_ptr<VolterraSolution> sol_;
};
std::unique_ptr<VolterraSolution> SineTau::sol_;

}  // namespace

TEST(AssembleBigF, ZeroData) {
  ProblemData d;
  for (double t : {0.01, 0.5, 1.0}) EXPECT_EQ(assemble_big_f(d, t), 0.0);
}

TEST(AssembleBigF, OnlyPhi1) {
  ProblemData d;
  d.phi1 = TimeFunction::callable([](double t) { return std::pow(t, P.beta - 1.0); }, P.beta - 1.0);
  for (double t : {0.01, 0.5, 1.0}) EXPECT_EQ(assemble_big_f(d, t), std::pow(t, P.beta - 1.0));
}

TEST(AssembleBigF, RejectsTimesOutsideInterval) {
  ProblemData d = sine_tau();
  EXPECT_THROW(assemble_big_f(d, 0.0), DomainError);
  EXPECT_THROW(assemble_big_f(d, 1.5), DomainError);
}

TEST(AssembleBigF, TauTermMatchesNestedAdaptiveQuadrature) {
  // Laplace-inversion kernel under adaptive Gauss-Kronrod.
  ProblemData d = sine_tau();
  for (double t : {0.05, 0.3, 0.9}) {
    auto K = [&](double x) { return oracle::kernel_laplace(P.alpha, P.beta1(), P.gamma1(), P.delta, P.beta1(), P.gamma1(), t, x); };
    auto integrand = [&](double s) { return std::sin(PI * s) * 0.5 * (K(1.0 - s) - K(1.0 + s)); };
    const double layer = std::pow(t, P.beta1());
    const double ref = -(gk(integrand, 0.0, 1.0 - layer) + gk(integrand, 1.0 - layer, 1.0));
    EXPECT_LT(rel(assemble_big_f(d, t), ref), 1e-9) << "t=" << t;
  }
}

TEST(AssembleBigF, Phi0TermMatchesAdaptiveQuadrature) {
  ProblemData d;
  d.phi0 = TimeFunction::callable([](double t) { return std::pow(t, P.beta - 1.0); }, P.beta - 1.0);
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double t : {0.2, 1.0}) {
    auto integrand = [&](double eta) {
      return t - eta > 0 ? std::pow(eta, P.beta - 1.0) * omega(t - eta, 1.0, P) : 0.0;
    };
    EXPECT_LT(rel(assemble_big_f(d, t), -ts.integrate(integrand, 0.0, t, 1e-13)), 1e-9) << "t=" << t;
  }
}

// K g(t) = int_0^t omega(t-y, 2a) g(y) dy by a fixed 40-point Gauss rule;
// omega(., 2a) is flat at zero on [0, 1], so the integrand is smooth.
template <class G>
double apply_k(G&& g, double t) {
  if (t <= 0) return 0.0;
  return boost::math::quadrature::gauss<double, 40>::integrate(
      [&](double y) { return t - y > 0 ? omega(t - y, 2.0, P) * g(y) : 0.0; }, 0.0, t);
}

TEST(NeumannKernel, IteratedKernelLawTwoFold) {
  // int F(y) omega(t-y, 4a) dy = K(K F)(t) for F = t^{beta-1}.
  const double t = 0.7, b = P.beta;
  // K F with z = y u^{1/beta} removing the endpoint power.
  auto KF = [&](double y) {
    if (y <= 0) return 0.0;
    return std::pow(y, b) / b *
           boost::math::quadrature::gauss<double, 40>::integrate(
               [&](double u) {
                 const double z = y * std::pow(u, 1.0 / b);
                 return y - z > 0 ? omega(y - z, 2.0, P) : 0.0;
               },
               0.0, 1.0);
  };
  const double nested = apply_k(KF, t);
  boost::math::quadrature::tanh_sinh<double> ts;
  const double single = ts.integrate(
      [&](double y) { return t - y > 0 ? std::pow(y, b - 1.0) * omega(t - y, 4.0, P) : 0.0; }, 0.0, t, 1e-13);
  EXPECT_LT(rel(single, nested), 1e-5);
}

TEST(NeumannKernel, IteratedKernelLawThreeFold) {
  const double t = 1.0;
  auto F = [](double y) { return 1.0 + y; };
  auto K1 = [&](double y) { return apply_k(F, y); };
  auto K2 = [&](double y) { return apply_k(K1, y); };
  const double nested = apply_k(K2, t);
  const double single = gk([&](double y) { return t - y > 0 ? F(y) * omega(t - y, 6.0, P) : 0.0; }, 0.0, t);
  EXPECT_LT(rel(single, nested), 1e-5);
}

TEST(NeumannKernel, SumsTheIteratedKernels) {
  GreenFunction g(P, D);
  for (double tau : {0.1, 0.5, 1.0}) {
    double direct = 0.0;
    for (int n = 1; n <= 8; ++n) direct += omega(tau, 2.0 * n, P);
    EXPECT_LT(rel(neumann_kernel(g, tau), direct), 1e-14);
  }
}

TEST(NeumannPsi1, ZeroSource) {
  ProblemData d;
  EXPECT_EQ(neumann_psi1(d, 0.5), 0.0);
  EXPECT_EQ(recover_psi(d, 0.5), 0.0);
}

TEST_F(SineTau, Psi1MatchesModeExpansion) {
  // The alternating expansion loses digits to cancellation beyond t ~ 0.3.
  for (double t : {1e-4, 0.01, 0.1, 0.3}) EXPECT_LT(rel(sol_->psi1()(t), psi1_modes(t)), 1e-6) << "t=" << t;
}

TEST_F(SineTau, Psi1MatchesLaplaceInversion) {
  for (double t : {0.3, 0.6, 0.8, 1.0}) EXPECT_LT(rel(sol_->psi1()(t), psi1_laplace(t)), 1e-6) << "t=" << t;
}

TEST_F(SineTau, Psi1SolvesTheVolterraEquation) {
  // psi1(t) - int omega(t-y, 2a) psi1(y) dy = F(t), F assembled afresh.
  const TimeFunction& psi1 = sol_->psi1();
  for (int k = 1; k <= 10; ++k) {
    const double t = 0.1 * k;
    const double conv = gk([&](double y) { return t - y > 0 ? omega(t - y, 2.0, P) * psi1(y) : 0.0; }, 0.0, t);
    const double F = assemble_big_f(sol_->data(), t);
    EXPECT_LT(std::fabs(psi1(t) - conv - F), 1e-5 * std::fabs(F)) << "t=" << t;
  }
}

TEST_F(SineTau, Psi1AtAgreesWithTable) {
  for (double t : {0.05, 0.5, 0.95}) EXPECT_LT(rel(sol_->psi1_at(t), sol_->psi1()(t)), 1e-7);
}

TEST_F(SineTau, PsiMatchesSpectralBoundaryFlux) {
  // psi(t) = -pi T_1(t), T_1 the first sine mode of the Dirichlet problem.
  for (double t : {0.01, 0.1, 0.3, 0.6}) {
    const double ref = -PI * oracle::spectral_mode(P.alpha, P.beta, P.gamma, P.delta, PI * PI, t);
    EXPECT_LT(rel(sol_->psi()(t), ref), 1e-4) << "t=" << t;
  }
}

TEST_F(SineTau, HalfIntegralOfPsiReturnsPsi1) {
  const OperatorParams half = OperatorParams::half(P);
  for (double t : {0.05, 0.3, 0.8}) EXPECT_LT(rel(0.5 * prabhakar_integral(sol_->psi(), half, t), sol_->psi1()(t)), 1e-4);
}

// Product-integration error falls like panels^-4; 64 panels reach 1e-6.
QuadratureSpec fine_mesh() {
  QuadratureSpec q;
  q.panels = 64;
  return q;
}

TEST(RecoverPsi, KernelProfileIsAnnihilated) {
  MlPower k{P.alpha, P.delta, P.beta1(), P.gamma1(), 0.5};
  TimeFunction psi1 = k.as_time_function();
  for (double t : {0.1, 0.5, 0.9})
    EXPECT_LT(std::fabs(recover_psi(psi1, P, t, fine_mesh())), 1e-6 * std::fabs(k(t))) << "t=" << t;
}

TEST(RecoverPsi, PowerRoundTrip) {
  const OperatorParams half = OperatorParams::half(P);
  for (double sigma : {0.6, 1.0, 2.5}) {
    TimeFunction psi1 = TimeFunction::callable(
        [=](double t) { return 0.5 * power_rule_integral(sigma, half, t); }, std::min(0.0, P.beta1() + sigma - 1.0));
    for (double t : {0.2, 0.7})
      EXPECT_LT(rel(recover_psi(psi1, P, t, fine_mesh()), std::pow(t, sigma - 1.0)), 1e-6) << "sigma=" << sigma << " t=" << t;
  }
}

TEST(RecoverPsi, ZeroProfile) { EXPECT_EQ(recover_psi(TimeFunction::zero(), P, 0.5), 0.0); }

TEST(TableGrid, GeometricThenCapped) {
  auto g = detail::table_grid(2.0);
  EXPECT_DOUBLE_EQ(g.front(), 2e-6);
  EXPECT_EQ(g.back(), 2.0);
  for (size_t i = 1; i < g.size(); ++i) {
    EXPECT_GT(g[i], g[i - 1]);
    EXPECT_LE(g[i] - g[i - 1], std::max(0.08 * g[i - 1], 2.0 / 48) * (1 + 1e-12) + 1e-15);
  }
}
