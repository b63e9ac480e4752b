#include "tdefl/pipeline.hpp"

#include <gtest/gtest.h>

using namespace tdefl;

namespace {

TEST(Deflate, GammaOneGivesOrthogonalFactors) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    for (double alpha : {0.0, 0.6}) {
      const SpikedSample s = gen_spiked({60, 6.0, 5.0, alpha, seed});
      const DeflationRun r = deflate(s.tensor, 1.0, &s.truth);
      EXPECT_LT(r.kappa_hat, 1e-6);
      ASSERT_TRUE(r.alignments.has_value());
      EXPECT_EQ(r.alignments->kappa, r.kappa_hat);
    }
  }
}

TEST(Deflate, GammaZeroRepeatsTheFirstFactor) {
  const SpikedSample s = gen_spiked({40, 7.0, 4.0, 0.3, 4});
  const DeflationRun r = deflate(s.tensor, 0.0);
  EXPECT_NEAR(std::abs(r.factor1.u.dot(r.factor2.u)), 1.0, 1e-9);
  EXPECT_NEAR(std::abs(r.factor1.v.dot(r.factor2.v)), 1.0, 1e-9);
  EXPECT_NEAR(r.factor1.lambda, r.factor2.lambda, 1e-9);
}

TEST(Deflate, OrthogonalComponentsBothRecovered) {
  const SpikedSample s = gen_spiked({150, 12.0, 7.0, 0.0, 5});
  const DeflationRun r = deflate(s.tensor, 1.0, &s.truth);
  const AlignmentRecord& a = *r.alignments;
  EXPECT_GT(a.rho1_u[0], 0.95);
  EXPECT_GT(a.theta2[1], 0.95);
  EXPECT_GT(a.rho2_v[1], 0.95);
  EXPECT_LE(a.mode_spread(), 0.1);
}

TEST(Deflate, RejectsGammaOutsideUnitInterval) {
  const SpikedSample s = gen_spiked({5, 1.0, 1.0, 0.0, 1});
  EXPECT_THROW(deflate(s.tensor, -0.1), ParameterError);
  EXPECT_THROW(deflate(s.tensor, 1.1), ParameterError);
}

TEST(Alignments, TruthFedAsFactors) {
  const SpikedSample s = gen_spiked({30, 1.0, 1.0, 0.4, 6});
  const GroundTruth& g = s.truth;
  const AlignmentRecord a = measure_alignments(g.x1, g.y1, g.z1, g.x2, g.y2, g.z2, g);
  EXPECT_NEAR(a.rho1_u[0], 1.0, 1e-14);
  EXPECT_NEAR(a.rho1_w[0], 1.0, 1e-14);
  EXPECT_NEAR(a.theta2[1], 1.0, 1e-14);
  EXPECT_NEAR(a.rho2_v[1], 1.0, 1e-14);
  EXPECT_NEAR(a.rho1_u[1], 0.4, 1e-14);
  EXPECT_NEAR(a.kappa, 0.4, 1e-14);
  EXPECT_NEAR(a.mode_spread(), 0.0, 1e-14);
}

TEST(Alignments, RandomVectorsAreNearlyOrthogonal) {
  const Index p = 150;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const SpikedSample s = gen_spiked({p, 1.0, 1.0, 0.5, 100 + seed});
    Rng rng(seed);
    std::array<Vector, 6> f;
    for (auto& v : f) v = random_unit_vector(rng, p);
    const AlignmentRecord a = measure_alignments(f[0], f[1], f[2], f[3], f[4], f[5], s.truth);
    for (int i = 0; i < 2; ++i) {
      for (double x : {a.rho1_u[i], a.rho1_v[i], a.rho1_w[i], a.theta2[i], a.rho2_v[i], a.rho2_w[i]}) EXPECT_LT(x, 0.3);
    }
  }
}

TEST(Matching, PrefersTheBetterPermutation) {
  const SpikedSample s = gen_spiked({30, 1.0, 1.0, 0.3, 7});
  const GroundTruth& g = s.truth;
  const ComponentMatch m = match_components({&g.x2, &g.y2, &g.z2}, {&g.x1, &g.y1, &g.z1}, g);
  EXPECT_EQ(m.component[0], 1);
  EXPECT_EQ(m.component[1], 0);
  EXPECT_NEAR(m.alignment_u[0], 1.0, 1e-14);
  const ComponentMatch k = match_components({&g.x1, &g.y1, &g.z1}, {&g.x1, &g.y1, &g.z1}, g);
  EXPECT_EQ(k.component[0], 0);  // tie keeps SNR order
}

TEST(Signs, CanonicalSignsKeepTheRankOneTensor) {
  const SpikedSample s = gen_spiked({20, 1.0, 1.0, 0.3, 8});
  Vector u = -s.truth.x1, v = -s.truth.y1, w = s.truth.z1;
  const double before = u[0] * v[1] * w[2];
  canonical_signs(u, v, w, s.truth);
  EXPECT_GT(v.dot(s.truth.y1), 0.0);
  EXPECT_GT(w.dot(s.truth.z1), 0.0);
  EXPECT_DOUBLE_EQ(u[0] * v[1] * w[2], before);
}

TEST(Signs, SignedMeasurementOfADeflation) {
  const SpikedSample s = gen_spiked({80, 10.0, 8.0, 0.6, 9});
  const DeflationRun r = deflate(s.tensor, 1.0, &s.truth);
  const SignedMeasurement m = signed_measurement(r, s.truth);
  EXPECT_EQ(m.first.lambda1, r.factor1.lambda);
  EXPECT_NEAR(std::abs(m.first.rho11), r.alignments->rho1_u[0], 1e-14);
  EXPECT_LT(std::abs(m.second.kappa), 1e-6);
  EXPECT_NEAR(m.second.tau, -1.0, 1e-6);
  EXPECT_GT(m.second.rho21 + m.second.rho22, 0.0);
}

TEST(Improved, OrthogonalCaseKeepsBaseline) {
  for (std::uint64_t seed : {1u, 2u}) {
    const SpikedSample s = gen_spiked({80, 9.0, 7.0, 0.0, seed});
    const ImprovedResult r = improved_deflation(s.tensor);
    ASSERT_FALSE(r.aborted) << r.warnings.front();
    EXPECT_GE(r.gamma_star, 0.9);
    const RankOneFactor& b2 = r.baseline.factor2;
    const auto& k = r.components;
    const ComponentMatch base = match_components({&r.baseline.factor1.u, &r.baseline.factor1.v, &r.baseline.factor1.w},
                                                 {&b2.u, &b2.v, &b2.w}, s.truth);
    const ComponentMatch imp = match_components({&k[0].u, &k[0].v, &k[0].w}, {&k[1].u, &k[1].v, &k[1].w}, s.truth);
    for (int f = 0; f < 2; ++f) EXPECT_GE(imp.alignment_u[f], base.alignment_u[f] - 0.02) << f;
  }
}

TEST(Improved, SweepTraceIsUnimodal) {
  const SpikedSample s = gen_spiked({80, 10.0, 8.0, 0.6, 3});
  const ImprovedResult r = improved_deflation(s.tensor);
  ASSERT_FALSE(r.aborted);
  ASSERT_GE(r.sweep_trace.size(), 2u);
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < r.sweep_trace.size(); ++i) {
    const double v = r.sweep_trace[i].value;
    if (v > r.sweep_trace[i - 1].value && v > r.sweep_trace[i + 1].value) ++peaks;
  }
  EXPECT_LE(peaks, 1);
  EXPECT_DOUBLE_EQ(r.sweep_trace.front().gamma, 1.0);
  EXPECT_GT(r.components[0].beta, r.components[1].beta - 1e-12);
  EXPECT_NEAR(r.components[1].u.norm(), 1.0, 1e-12);
}

TEST(Improved, RejectsBadStep) {
  const SpikedSample s = gen_spiked({5, 1.0, 1.0, 0.0, 1});
  EXPECT_THROW(improved_deflation(s.tensor, 0.0), ParameterError);
  EXPECT_THROW(improved_deflation(s.tensor, 0.5), ParameterError);
}

TEST(Improved, EstimationFailureFallsBackToBaseline) {
  // the second singular value lies below the bulk edge, so estimation is refused
  const Index p = 12;
  Tensor3 t = 5.0 * outer3(Vector::Unit(p, 0), Vector::Unit(p, 0), Vector::Unit(p, 0));
  t += 0.5 * outer3(Vector::Unit(p, 1), Vector::Unit(p, 1), Vector::Unit(p, 1));
  const ImprovedResult r = improved_deflation(t);
  EXPECT_TRUE(r.aborted);
  EXPECT_EQ(r.gamma_star, 1.0);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings.front().find("estimation"), std::string::npos);
  EXPECT_EQ(r.components[0].u, r.baseline.factor1.u);
  EXPECT_NEAR(r.components[1].beta, 0.5, 1e-10);
}

}  // namespace
