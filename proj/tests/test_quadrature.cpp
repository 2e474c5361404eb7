#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "prabgreen/quadrature.hpp"

using namespace prabgreen;

TEST(GaussRule, MatchesReferenceNodes) {
  using ref = boost::math::quadrature::gauss<double, 10>;
  const GaussRule& g = gauss_rule(10);
  // Boost stores the non-negative half, largest weight first for odd/even layouts.
  for (size_t i = 0; i < ref::abscissa().size(); ++i) {
    double x = ref::abscissa()[i], w = ref::weights()[i];
    bool found = false;
    for (size_t j = 0; j < g.x.size(); ++j)
      if (std::fabs(g.x[j] - x) < 1e-15) {
        EXPECT_NEAR(g.w[j], w, 1e-15);
        found = true;
      }
    EXPECT_TRUE(found) << x;
  }
}

TEST(GaussRule, ExactForPolynomials) {
  for (int n : {2, 5, 10, 20}) {
    const GaussRule& g = gauss_rule(n);
    for (int d = 0; d < 2 * n; ++d) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += g.w[i] * std::pow(g.x[i], d);
      double exact = (d % 2 == 1) ? 0.0 : 2.0 / (d + 1);
      EXPECT_NEAR(s, exact, 1e-14) << n << " " << d;
    }
  }
}

TEST(Integrate, SmoothIntegrand) {
  double v = integrate([](double x) { return std::exp(x) * std::cos(3 * x); }, 0.0, 2.0);
  double exact = (std::exp(2.0) * (std::cos(6.0) + 3 * std::sin(6.0)) - 1.0) / 10.0;
  EXPECT_NEAR(v, exact, 1e-13);
}

TEST(Integrate, EndpointSingularities) {
  // Beta(0.7, 0.4) with both endpoint singularities declared.
  double v = integrate([](double x) { return std::pow(x, -0.3) * std::pow(1 - x, -0.6); }, 0.0, 1.0, {-0.3, 0.0},
                       {-0.6, 0.0});
  double exact = std::tgamma(0.7) * std::tgamma(0.4) / std::tgamma(1.1);
  EXPECT_LT(std::fabs(v - exact) / exact, 1e-13);
}

TEST(Integrate, SingularTimesSmoothAgainstTanhSinh) {
  auto f = [](double x) { return std::pow(x, -0.55) * std::cos(x) * std::exp(-x * x); };
  boost::math::quadrature::tanh_sinh<double> ts;
  double ref = ts.integrate(f, 0.0, 1.5);
  EXPECT_LT(std::fabs(integrate(f, 0.0, 1.5, {-0.55, 0.0}) - ref) / ref, 1e-12);
}

TEST(Integrate, BoundaryLayer) {
  const double eps = 1e-5;
  double v = integrate([&](double x) { return std::exp(-x / eps); }, 0.0, 1.0, {0.0, eps});
  EXPECT_LT(std::fabs(v - eps) / eps, 1e-12);
  double w = integrate([&](double x) { return std::exp(-(1 - x) / eps); }, 0.0, 1.0, {}, {0.0, eps});
  EXPECT_LT(std::fabs(w - eps) / eps, 1e-12);
}

TEST(Integrate, EmptyAndReversedIntervals) {
  EXPECT_EQ(integrate([](double) { return 1.0; }, 0.3, 0.3), 0.0);
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0.5, 0.3), DomainError);
  EXPECT_THROW(integrate([](double) { return NAN; }, 0.0, 1.0), QuadratureFailure);
}

TEST(GradedMesh, SymmetricAndMonotone) {
  std::vector<double> m = graded_mesh(0.8, 16, 3.0);
  ASSERT_EQ(m.size(), 17u);
  EXPECT_EQ(m.front(), 0.0);
  EXPECT_EQ(m.back(), 0.8);
  EXPECT_EQ(m[8], 0.4);
  for (size_t i = 1; i < m.size(); ++i) EXPECT_GT(m[i], m[i - 1]);
  for (size_t i = 0; i <= 8; ++i) EXPECT_NEAR(m[i], 0.8 - m[16 - i], 1e-16);
  EXPECT_NEAR(m[1], 0.4 * std::pow(1.0 / 8, 3.0), 1e-18);
}

TEST(QuadratureSpecTest, Validation) {
  QuadratureSpec q;
  EXPECT_NO_THROW(q.validate());
  q.panels = 3;
  EXPECT_THROW(q.validate(), DomainError);
  q = {};
  q.interp_order = 3;
  EXPECT_THROW(q.validate(), DomainError);
  q = {};
  q.grading = 0.5;
  EXPECT_THROW(q.validate(), DomainError);
  q = {};
  EXPECT_NEAR(q.grading_for(0.9), 4.0 / 0.9, 1e-15);
  EXPECT_EQ(q.grading_for(0.1), 6.0);
  q.grading = 2.0;
  EXPECT_EQ(q.grading_for(0.1), 2.0);
}
