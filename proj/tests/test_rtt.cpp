#include "oracle_values.hpp"

#include "tdefl/rtt.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace tdefl;

namespace {

std::vector<double> collapse_points() {
  std::vector<double> z;
  for (int i = 0; i < 20; ++i) z.push_back(1.64 + (12.0 - 1.64) * (i + 1) / 20.0);
  return z;
}

TEST(Semicircle, TransformMatchesOracle) {
  for (const auto& pt : oracle::kRSemicircle) EXPECT_NEAR(r_semicircle(pt.x), pt.value, 1e-13) << pt.x;
  for (const auto& pt : oracle::kRComplex) EXPECT_LT(std::abs(r_semicircle(pt.z) - pt.value), 1e-13);
}

TEST(Semicircle, EdgeValueAndDecay) {
  EXPECT_NEAR(r_semicircle(kSemicircleEdge), -std::sqrt(1.5), 1e-7);
  EXPECT_NEAR(r_semicircle(2.0), -0.633975, 1e-6);
  EXPECT_LT(std::abs(r_semicircle(1e6)), 2e-6);
  EXPECT_LT(r_semicircle(5.0), 0.0);
}

TEST(Semicircle, InsideSupportIsDomainError) {
  EXPECT_THROW(r_semicircle(0.5), DomainError);
  EXPECT_THROW(r_semicircle(-1.0), DomainError);
  EXPECT_NO_THROW(r_semicircle(Complex(0.5, 1e-9)));
}

TEST(Semicircle, HerglotzBranch) {
  for (double x : {-3.0, -1.0, 0.0, 0.7, 1.6, 4.0}) {
    for (double y : {1e-6, 0.01, 1.0, 10.0}) EXPECT_GT(r_semicircle(Complex(x, y)).imag(), 0.0) << x << " " << y;
  }
}

TEST(Semicircle, DensityAndCdf) {
  EXPECT_NEAR(semicircle_density(0.0), 0.389848, 1e-6);
  EXPECT_EQ(semicircle_density(kSemicircleEdge), 0.0);
  EXPECT_EQ(semicircle_density(-kSemicircleEdge), 0.0);
  EXPECT_EQ(semicircle_density(2.0), 0.0);
  const std::vector<double> g = linspace(-1.7, 1.7, 4001);
  double s = 0.0;
  for (std::size_t i = 1; i < g.size(); ++i) s += 0.5 * (semicircle_density(g[i]) + semicircle_density(g[i - 1])) * (g[i] - g[i - 1]);
  EXPECT_NEAR(s, 1.0, 1e-4);
  for (const auto& pt : oracle::kSemicircleCdf) EXPECT_NEAR(semicircle_cdf(pt.x), pt.value, 1e-12) << pt.x;
}

TEST(Semicircle, FunctionalIdentities) {
  for (double z : collapse_points()) {
    EXPECT_NEAR(h_r(z), z + 2.0 / 3.0 * r_semicircle(z), 1e-12) << z;
    EXPECT_NEAR(f_r(z), z + r_semicircle(z), 1e-15);
  }
}

TEST(FixedPoint, CollapsesToSemicircleAtTauMinusOne) {
  const StieltjesState s = stieltjes_fixed_point(3.0, -1.0);
  const Complex r3 = r_semicircle(Complex(3.0, 0.0));
  EXPECT_LT(std::abs(s.a - r3 / 3.0), 1e-10);
  EXPECT_LT(std::abs(s.b - r3 / 3.0), 1e-10);
  EXPECT_LT(std::abs(s.q - r3), 1e-10);
  EXPECT_NEAR(stieltjes_fixed_point(2.0, -1.0).q.real(), -0.633975, 1e-6);
  for (double z : collapse_points()) {
    const StieltjesState t = stieltjes_fixed_point(z, -1.0);
    EXPECT_LT(std::abs(t.q - r_semicircle(Complex(z, 0.0))), 1e-10) << z;
    EXPECT_LT(std::max(t.residuals()[0], t.residuals()[1]), 1e-12);
  }
}

TEST(FixedPoint, MatchesOracleStates) {
  for (const auto& fp : oracle::kFixedPoints) {
    for (const StieltjesState& s : {stieltjes(fp.z, fp.tau), stieltjes_algebraic(fp.z, fp.tau)}) {
      EXPECT_LT(std::abs(s.a - fp.a), 1e-10) << fp.z << " " << fp.tau;
      EXPECT_LT(std::abs(s.b - fp.b), 1e-10);
      EXPECT_LT(std::abs(s.q - fp.q), 1e-10);
    }
  }
}

TEST(FixedPoint, ResidualsAndHerglotzOnRandomDraws) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> xr(-3.0, 3.0), yr(0.01, 2.0), tr(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Complex z(xr(gen), yr(gen));
    const double tau = tr(gen);
    const StieltjesState s = stieltjes(z, tau);
    EXPECT_LT(std::max(s.residuals()[0], s.residuals()[1]), 1e-12) << z << " " << tau;
    EXPECT_GT(s.q.imag(), 0.0) << z << " " << tau;
  }
}

TEST(FixedPoint, IterationCapIsConvergenceError) {
  FixedPointConfig cfg;
  cfg.max_iter = 2;
  EXPECT_THROW(stieltjes_fixed_point(Complex(0.1, 0.01), -0.3, cfg), ConvergenceError);
}

TEST(Density, ReducesToSemicircle) {
  const std::vector<double> g = linspace(-2.0, 2.0, 401);
  const DensityTable t = nu_density(g, -1.0, 1e-6);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(t.values[i], semicircle_density(g[i]), 0.002) << g[i];
}

TEST(Density, NormalisedOverAttainableTau) {
  // gamma in [0, 1] and kappa in [-1, 1] give tau in [-2, 0]
  for (double tau : {-2.0, -1.5, -1.0, -0.8, -0.5631, -0.2, -0.05}) {
    const DensityTable t = nu_density(linspace(-4.0, 4.0, 4001), tau);
    EXPECT_GT(t.trapezoid(), 0.99) << tau;
    EXPECT_LT(t.trapezoid(), 1.01) << tau;
    for (double v : t.values) EXPECT_GE(v, 0.0);
  }
}

TEST(Density, PositiveTauHasNoSpuriousTail) {
  // for tau > 0 the cubic has a root b ~ z / tau with Im b > 0; it must not be picked
  for (double tau : {1e-3, 0.1, 0.5, 1.0}) {
    for (double x : {2.0, 5.0, 9.5}) EXPECT_LT(nu_density_at(x, tau), 1e-6) << tau << " " << x;
    const Complex z(0.0, 1e4);
    EXPECT_NEAR((-z * stieltjes(z, tau).q).real(), 1.0, 1e-6);
  }
}

TEST(Density, HerglotzAcrossGridAndTau) {
  for (double tau = -1.0; tau <= 1.0 + 1e-12; tau += 0.25) {
    for (double x : linspace(-3.0, 3.0, 121)) EXPECT_GE(stieltjes_algebraic(Complex(x, 1e-6), tau).q.imag(), -1e-12);
  }
}

TEST(Density, DeformedLawIsSymmetricButNotSemicircular) {
  // (z, a, b) -> (-z, -a, -b) maps the system onto itself, so nu is even
  const double tau = -0.5631;
  const std::vector<double> g = linspace(-2.0, 2.0, 401);
  const DensityTable t = nu_density(g, tau);
  double asym = 0.0, dev = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    asym = std::max(asym, std::abs(t.values[i] - t.values[g.size() - 1 - i]));
    dev = std::max(dev, std::abs(t.values[i] - semicircle_density(g[i])));
  }
  EXPECT_LT(asym, 1e-9);
  EXPECT_GT(dev, 0.02);
  EXPECT_LT(support_right_edge(tau), kSemicircleEdge - 0.05);
}

TEST(Density, RejectsBadEps) { EXPECT_THROW(nu_density({0.0}, -1.0, 0.0), ParameterError); }

TEST(TabulatedCdfTest, MonotoneAndBounded) {
  const TabulatedCdf cdf(nu_density(linspace(-2.0, 2.0, 801), -1.0));
  EXPECT_EQ(cdf(-5.0), 0.0);
  EXPECT_EQ(cdf(5.0), 1.0);
  EXPECT_NEAR(cdf(0.0), 0.5, 1e-6);
  EXPECT_NEAR(cdf(0.4), semicircle_cdf(0.4), 1e-3);
}

TEST(SupportEdge, MatchesOracle) {
  for (const auto& pt : oracle::kSupportEdge) EXPECT_NEAR(support_right_edge(pt.x), pt.value, 5e-3) << pt.x;
}

TEST(SupportEdge, ContinuousAndPositive) {
  double prev = support_right_edge(-1.0);
  for (double tau = -1.0; tau <= 1.0 + 1e-12; tau += 0.1) {
    const double e = support_right_edge(tau);
    EXPECT_GT(e, 0.0);
    EXPECT_LT(std::abs(e - support_right_edge(tau + 1e-3)), 0.05) << tau;
    EXPECT_LT(std::abs(e - prev), 0.2);
    prev = e;
  }
}

}  // namespace
