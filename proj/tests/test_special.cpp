#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracle/mp_series.hpp"
#include "prabgreen/special.hpp"

using namespace prabgreen;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

}  // namespace

TEST(Rgamma, KnownValues) {
  EXPECT_EQ(rgamma(1.0), 1.0);
  EXPECT_EQ(rgamma(0.0), 0.0);
  EXPECT_EQ(rgamma(-3.0), 0.0);
  EXPECT_NEAR(rgamma(0.5), 1.0 / std::sqrt(M_PI), 1e-16);
}

TEST(Rgamma, Recurrence) {
  for (double x : {-7.3, -2.5, -0.4, 0.3, 1.7, 10.2, 150.5, 180.25}) {
    double lhs = rgamma(x + 1), rhs = rgamma(x) / x;
    EXPECT_LT(rel(lhs, rhs), 1e-13) << x;
  }
}

TEST(Rgamma, LargeArgumentsStayFinite) {
  EXPECT_GT(rgamma(160.0), 0.0);
  EXPECT_TRUE(std::isfinite(rgamma(-160.5)));
  EXPECT_LT(rel(rgamma(160.0), std::exp(-std::lgamma(160.0))), 1e-12);
}

TEST(Pochhammer, Basics) {
  EXPECT_EQ(pochhammer(0.5, 0), 1.0);
  EXPECT_EQ(pochhammer(3.0, 2), 12.0);
  EXPECT_EQ(pochhammer(-2.0, 3), 0.0);
  for (int k = 0; k < 20; ++k) EXPECT_LT(rel(pochhammer(0.37, k + 1), pochhammer(0.37, k) * (0.37 + k)), 1e-13);
}

TEST(PrabhakarE, TrivialCases) {
  EXPECT_LT(rel(prabhakar_e(1, 1, 1, 1), std::exp(1.0)), 1e-14);
  EXPECT_EQ(prabhakar_e(0.7, 0.9, 0.0, 3.0), rgamma(0.9));
  EXPECT_EQ(prabhakar_e(0.7, 0.9, 0.5, 0.0), rgamma(0.9));
}

TEST(PrabhakarE, ExponentialReduction) {
  for (double z = -5; z <= 5; z += 0.5) EXPECT_LT(rel(prabhakar_e(1, 1, 1, z), std::exp(z)), 1e-12) << z;
}

TEST(PrabhakarE, FrozenNegativeIndex) {
  // 50-digit direct summation.
  EXPECT_LT(rel(prabhakar_e(0.7, -0.45, -0.25, -0.8), -0.25977431349520869), 1e-13);
}

TEST(PrabhakarE, OraclePanel) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> ua(0.3, 1.5), ub(-1.5, 2.0), ug(-1.0, 1.5), uz(-4.0, 4.0);
  for (int i = 0; i < 25; ++i) {
    double a = ua(rng), b = ub(rng), g = ug(rng), z = uz(rng);
    double ref = oracle::prabhakar(a, b, g, z);
    SeriesResult r = prabhakar_e_series(a, b, g, z);
    EXPECT_LE(std::fabs(r.value - ref), std::max(r.bound, 1e-13 * std::fabs(ref)) + 1e-300)
        << a << " " << b << " " << g << " " << z;
  }
}

TEST(PrabhakarE, CancellationTriggersExtendedPrecision) {
  // Large negative argument: terms reach ~1e8 while the sum is small.
  SeriesResult r = prabhakar_e_series(1.0, 1.0, 1.0, -25.0);
  EXPECT_TRUE(r.extended);
  EXPECT_LT(rel(r.value, std::exp(-25.0)), 1e-12);
}

TEST(PrabhakarE, MonotoneRefinement) {
  SeriesControl loose;
  loose.rel_tol = 1e-8;
  loose.abs_tol = 1e-10;
  SeriesControl tight = loose;
  tight.rel_tol /= 2;
  tight.abs_tol /= 2;
  for (double z : {-2.0, -0.5, 0.7, 2.5}) {
    SeriesResult a = prabhakar_e_series(0.7, 0.9, 0.5, z, loose);
    SeriesResult b = prabhakar_e_series(0.7, 0.9, 0.5, z, tight);
    EXPECT_LE(std::fabs(a.value - b.value), a.bound) << z;
  }
}

TEST(PrabhakarE, NonConvergenceReported) {
  SeriesControl c;
  c.max_terms = 3;
  EXPECT_THROW(prabhakar_e(0.7, 0.9, 0.5, 2.0, c), NonConvergence);
}

TEST(WrightE, Basics) {
  EXPECT_EQ(wright_e(0.45, 0.3, 0.0), rgamma(0.3));
  EXPECT_LT(rel(wright_e(0.45, 0.45, -2.0), 0.19876350109797414), 1e-13);
  EXPECT_THROW(wright_e(1.2, 0.3, 0.1), DomainError);
}

TEST(WrightE, ErfcReduction) {
  // sum z^n/(n! Gamma(1 - n/2)) = erfc(-z/2).
  for (double z : {-3.0, -1.0, 0.5, 2.0}) EXPECT_LT(rel(wright_e(0.5, 1.0, z), std::erfc(-z / 2)), 1e-13) << z;
}

TEST(WrightE, OraclePanel) {
  // For beta near 1 the terms peak near n ~ |z|^{1/(1-beta)}; keep |z| small there.
  for (double b : {0.2, 0.45, 0.8})
    for (double d : {-0.5, 0.0, 0.45, 1.0})
      for (double z : {-6.0, -1.5, 0.8, 3.0}) {
        if (b > 0.5 && std::fabs(z) > 2) continue;
        double ref = oracle::wright(b, d, z);
        SeriesResult r = wright_e_series(b, d, z);
        EXPECT_LE(std::fabs(r.value - ref), std::max(r.bound, 1e-13 * std::fabs(ref)) + 1e-300)
            << b << " " << d << " " << z;
      }
}

TEST(E12, ConvergencePredicate) {
  E12Params p{0.3, 0.2, 1.1, 0.9, 0.8, 1.3, 0.5, 0.7, 0.6, 1.0, 0.5, 0.9};
  EXPECT_NEAR(p.delta1(), 1.7, 1e-15);
  EXPECT_NEAR(p.delta2(), 1.1, 1e-15);
  EXPECT_TRUE(p.convergent());
  E12Params q = p;
  q.b1 = 5.0;
  EXPECT_FALSE(q.convergent());
  EXPECT_THROW(e12(q, 0.1, 0.1), DivergentParameters);
}

TEST(E12, OriginCollapses) {
  E12Params p{0.3, 0.2, 1.1, 0.9, 0.8, 1.3, 0.5, 0.7, 0.6, 1.0, 0.5, 0.9};
  double expect = std::tgamma(1.1) * rgamma(1.3) * rgamma(0.7) * rgamma(1.0) * rgamma(0.9);
  EXPECT_LT(rel(e12(p, 0.0, 0.0), expect), 1e-15);
}

TEST(E12, FrozenPanelValue) {
  E12Params p{0.3, 0.2, 1.1, 0.9, 0.8, 1.3, 0.5, 0.7, 0.6, 1.0, 0.5, 0.9};
  EXPECT_LT(rel(e12(p, 0.7, -1.1), 0.73773161630958262), 1e-12);
}

TEST(E12, GreenRowFrozen) {
  const double b1 = 0.45, g1 = 0.25, al = 0.7;
  E12Params p{-g1, 1, g1, -b1, al, b1, -g1, g1, 1, 1, 1, 1};
  EXPECT_LT(rel(e12(p, -0.8, -0.6), 0.32576613561836798), 1e-12);
}

TEST(E12, OracleParameterPanel) {
  struct Case {
    E12Params p;
    double x, y;
  };
  const Case cases[] = {
      {{0.3, 0.2, 1.1, 0.9, 0.8, 1.3, 0.5, 0.7, 0.6, 1.0, 0.5, 0.9}, -1.3, 0.6},
      {{0.5, 0.5, 0.5, 0.7, 0.9, 0.4, 0.6, 1.2, 0.3, 1.0, 0.7, 1.0}, 0.9, 0.8},
      {{-0.25, 1.0, 0.25, -0.45, 0.7, 0.45, -0.25, 0.25, 1.0, 1.0, 1.0, 1.0}, -1.5, -0.9},
      {{-0.25, 1.0, 0.0, -0.45, 0.7, 0.0, -0.25, 0.0, 1.0, 1.0, 1.0, 1.0}, -0.7, -0.5},
  };
  for (const Case& c : cases) {
    ASSERT_GE(c.p.delta1(), 0.1);
    ASSERT_GE(c.p.delta2(), 0.1);
    const E12Params& p = c.p;
    double ref = oracle::e12({p.a1, p.b1, p.d1, p.a2, p.b2, p.d2, p.a3, p.d3, p.a4, p.d4, p.b3, p.d5}, c.x, c.y, 120);
    EXPECT_LT(std::fabs(e12(p, c.x, c.y) - ref), 1e-9 * std::max(1.0, std::fabs(ref))) << c.x << " " << c.y;
  }
}

TEST(E12, XZeroReducesToPrabhakar) {
  // Row of the Green's function kernel: at x = 0 only n = 0 survives and the
  // m-sum is E^{gamma1}_{alpha,beta1}(y).
  const double b1 = 0.45, g1 = 0.25, al = 0.7;
  E12Params p{-g1, 1, g1, -b1, al, b1, -g1, g1, 1, 1, 1, 1};
  for (double y : {-1.0, -0.3, 0.4}) EXPECT_LT(rel(e12(p, 0.0, y), prabhakar_e(al, b1, g1, y)), 1e-13);
}

TEST(E12, UnpairedNumeratorPoleIsInvalid) {
  // Gamma(-1) in the numerator with all denominators regular.
  E12Params p{1.0, 1.0, -1.0, 1.0, 1.0, 0.5, 1.0, 0.5, 1.0, 0.5, 1.0, 0.5};
  EXPECT_THROW(e12(p, 0.1, 0.1), InvalidTerm);
}

TEST(E12, ExtendedPrecisionAgrees) {
  E12Params p{0.3, 0.2, 1.1, 0.9, 0.8, 1.3, 0.5, 0.7, 0.6, 1.0, 0.5, 0.9};
  SeriesControl c;
  c.precision = Precision::extended;
  SeriesResult r = e12_series(p, 0.7, -1.1, c);
  EXPECT_TRUE(r.extended);
  EXPECT_LT(rel(r.value, 0.73773161630958262), 1e-14);
}
