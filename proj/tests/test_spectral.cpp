#include "naive.hpp"

#include "tdefl/pipeline.hpp"
#include "tdefl/rtt.hpp"
#include "tdefl/spectral.hpp"

#include <gtest/gtest.h>

using namespace tdefl;

namespace {

struct Fixture {
  Tensor3 w;
  Vector u, v, x;
};

Fixture fixture(Index p, std::uint64_t seed) {
  Rng rng(seed);
  Fixture f{naive::random_tensor(p, seed), random_unit_vector(rng, p), random_unit_vector(rng, p),
            random_unit_vector(rng, p)};
  return f;
}

TEST(BuildN, ZeroTensorGivesZeroMatrix) {
  const Vector e = Vector::Unit(3, 0);
  EXPECT_EQ(build_N(Tensor3(3), e, e, e).entries, Matrix::Zero(9, 9));
}

TEST(BuildN, SymmetricWithZeroDiagonalBlocks) {
  const Index p = 10;
  const auto f = fixture(p, 1);
  const Matrix n = build_N(f.w, f.u, f.v, f.x).entries;
  EXPECT_EQ(n, n.transpose());
  for (Index b = 0; b < 3; ++b) EXPECT_EQ(n.block(b * p, b * p, p, p), Matrix::Zero(p, p));
}

TEST(BuildN, BlocksMatchDirectContraction) {
  const Index p = 4;
  const auto f = fixture(p, 2);
  const Matrix n = build_N(f.w, f.u, f.v, f.x).entries;
  const double s = 1.0 / std::sqrt(12.0);
  const Matrix ww = naive::contract1(f.w, f.x, Mode::Three);
  const Matrix wv = naive::contract1(f.w, f.v, Mode::Two);
  const Matrix wu = naive::contract1(f.w, f.u, Mode::One);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) {
      EXPECT_NEAR(n(i, p + j), s * ww(i, j), 1e-14);
      EXPECT_NEAR(n(i, 2 * p + j), s * wv(i, j), 1e-14);
      EXPECT_NEAR(n(p + i, 2 * p + j), s * wu(i, j), 1e-14);
    }
  EXPECT_THROW(build_N(f.w, Vector::Ones(3), f.v, f.x), DimensionError);
}

TEST(BuildM, ReducesToBuildN) {
  const Index p = 6;
  const auto f = fixture(p, 3);
  Rng rng(4);
  const Vector u1 = random_unit_vector(rng, p);
  EXPECT_EQ(build_M(f.w, u1, f.u, f.v, f.x, 0.0).entries, build_N(f.w, f.u, f.v, f.x).entries);
  Vector u2 = f.u - f.u.dot(u1) * u1;
  u2.normalize();
  EXPECT_LT((build_M(f.w, u1, u2, f.v, f.x, 0.7).entries - build_N(f.w, u2, f.v, f.x).entries).cwiseAbs().maxCoeff(),
            1e-15);
  EXPECT_THROW(build_M(f.w, u1, u2, f.v, f.x, 1.5), ParameterError);
}

TEST(BuildM, ThirdBlockUsesCorrectedVector) {
  const Index p = 4;
  const auto f = fixture(p, 5);
  Rng rng(6);
  const Vector u1 = random_unit_vector(rng, p);
  const double gamma = 0.6, kappa = u1.dot(f.u);
  const Matrix m = build_M(f.w, u1, f.u, f.v, f.x, gamma).entries;
  const Matrix expect =
      (naive::contract1(f.w, f.u, Mode::One) - gamma * kappa * naive::contract1(f.w, u1, Mode::One)) / std::sqrt(12.0);
  EXPECT_LT((m.block(p, 2 * p, p, p) - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Spectrum, PlusMinusPair) {
  SymBlockMatrix s;
  s.p = 1;
  s.entries = Matrix{{0.0, 2.5}, {2.5, 0.0}};
  const SpectrumResult r = sym_eigenvalues(s);
  EXPECT_NEAR(r.eigenvalues[0], -2.5, 1e-14);
  EXPECT_NEAR(r.eigenvalues[1], 2.5, 1e-14);
}

TEST(Spectrum, TraceAndFrobeniusMoments) {
  const Index p = 100;
  const auto f = fixture(p, 7);
  const SymBlockMatrix s = build_N(f.w, f.u, f.v, f.x);
  const SpectrumResult r = sym_eigenvalues(s);
  ASSERT_EQ(r.size(), 300);
  EXPECT_NEAR(r.eigenvalues.sum(), s.trace(), 300 * 1e-10);
  EXPECT_NEAR(r.eigenvalues.squaredNorm() / s.entries.squaredNorm(), 1.0, 1e-8);
}

TEST(Stieltjes, SingleEigenvalue) {
  const SpectrumResult r{Vector::Zero(1), "x", {}};
  EXPECT_NEAR(empirical_stieltjes(r, 2.0).real(), -0.5, 1e-15);
  EXPECT_THROW(empirical_stieltjes(r, 0.0), PoleError);
  EXPECT_THROW(empirical_stieltjes(SpectrumResult{}, 1.0), DegenerateInputError);
}

TEST(Stieltjes, ConjugateSymmetryAndResolventTrace) {
  const auto f = fixture(8, 8);
  const SymBlockMatrix s = build_N(f.w, f.u, f.v, f.x);
  const SpectrumResult r = sym_eigenvalues(s);
  const Complex z(0.3, 0.7);
  EXPECT_LT(std::abs(empirical_stieltjes(r, std::conj(z)) - std::conj(empirical_stieltjes(r, z))), 1e-15);
  EXPECT_NEAR(resolvent_trace(s.entries, 5.0), empirical_stieltjes(r, 5.0).real(), 1e-12);
}

TEST(Stieltjes, NoiseSpectrumApproachesSemicircleTransform) {
  const SpikedSample smp = gen_spiked({200, 0.0, 0.0, 0.0, 9});
  Rng rng(10);
  const Index p = 200;
  const SpectrumResult r =
      sym_eigenvalues(build_N(smp.truth.noise, random_unit_vector(rng, p), random_unit_vector(rng, p),
                              random_unit_vector(rng, p)));
  EXPECT_LT(std::abs(empirical_stieltjes(r, 3.0).real() - r_semicircle(3.0)), 0.02);
}

TEST(Histogram, EqualEigenvaluesGiveOneBin) {
  const SpectrumResult r{Vector::Constant(5, 1.5), "x", {}};
  const Histogram h = histogram(r, 10);
  ASSERT_EQ(h.density.size(), 1u);
  EXPECT_DOUBLE_EQ(h.integral(), 1.0);
}

TEST(Histogram, IntegratesToOne) {
  const SpectrumResult r{naive::random_vector(97, 3), "x", {}};
  for (int bins : {1, 7, 40}) {
    const Histogram h = histogram(r, bins);
    EXPECT_EQ(h.density.size(), static_cast<std::size_t>(bins));
    EXPECT_NEAR(h.integral(), 1.0, 1e-12);
  }
  EXPECT_THROW(histogram(r, 0), ParameterError);
}

TEST(Histogram, SupDeviationOfExactQuantilesIsSmall) {
  // eigenvalues at the semicircle quantiles: histogram and KS distance must be tiny
  const int n = 4000;
  Vector ev(n);
  for (int i = 0; i < n; ++i) {
    const double target = (i + 0.5) / n;
    double lo = -kSemicircleEdge, hi = kSemicircleEdge;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (lo + hi);
      (semicircle_cdf(mid) < target ? lo : hi) = mid;
    }
    ev[i] = 0.5 * (lo + hi);
  }
  const SpectrumResult r{ev, "q", {}};
  EXPECT_LT(ks_distance(r, semicircle_cdf), 1.0 / n + 1e-9);
  EXPECT_LT(histogram_sup_deviation(histogram(r, 40), semicircle_cdf), 0.02);
}

TEST(Perturbation, SignalShiftsNormalisedTraceByOrderOneOverN) {
  // N built from sqrt(n) T and from W differ by a finite-rank term whose
  // effect on the normalised resolvent trace halves when p doubles
  auto gap = [](Index p, int trials) {
    double s = 0.0;
    for (int t = 0; t < trials; ++t) {
      const SpikedSample smp = gen_spiked({p, 20.0, 15.0, 0.8, static_cast<std::uint64_t>(500 + t)});
      const GroundTruth& g = smp.truth;
      const Tensor3 scaled = std::sqrt(noise_size(p)) * smp.tensor;
      s += std::abs(resolvent_trace(build_N(scaled, g.x1, g.y1, g.z1).entries, 3.0) -
                    resolvent_trace(build_N(g.noise, g.x1, g.y1, g.z1).entries, 3.0));
    }
    return s / trials;
  };
  const double ratio = gap(60, 10) / gap(30, 10);
  EXPECT_GT(ratio, 0.3);
  EXPECT_LT(ratio, 0.8);
}

TEST(SecondStepMatrix, BulkStaysInsideSemicircleEdgeAtGammaOne) {
  const Index p = 200;
  const SpikedSample smp = gen_spiked({p, 20.0, 15.0, 0.8, 12});
  const DeflationRun run = deflate(smp.tensor, 1.0);
  const SpectrumResult r = sym_eigenvalues(
      build_M(smp.truth.noise, run.factor1.u, run.factor2.u, run.factor2.v, run.factor2.w, 1.0));
  // drop up to four outliers on either side
  const Index n = r.size();
  const double bulk = std::max(std::abs(r.eigenvalues[4]), std::abs(r.eigenvalues[n - 5]));
  EXPECT_LE(bulk, kSemicircleEdge + 0.15);
}

}  // namespace
