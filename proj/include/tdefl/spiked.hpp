#pragma once

// Rank-two spiked tensor model
//
//   T = beta1 x1 (x) y1 (x) z1 + beta2 x2 (x) y2 (x) z2 + W / sqrt(n),  n = 3p,
//
// with Gaussian noise W and the same correlation alpha between the two
// components in every mode.

#include "tdefl/tensor.hpp"

#include <array>

namespace tdefl {

struct SpikedModel {
  Index p = 100;
  double beta1 = 0.0;
  double beta2 = 0.0;
  double alpha = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (p < 1) throw ParameterError("spiked model: p must be >= 1");
    if (!(beta1 >= 0.0) || !(beta2 >= 0.0) || !std::isfinite(beta1) || !std::isfinite(beta2))
      throw ParameterError("spiked model: SNRs must be finite and >= 0");
    if (!(alpha >= 0.0 && alpha < 1.0))
      throw ParameterError("spiked model: alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
};

/// Noise normalisation of the model, n = 3p.
inline double noise_size(Index p) { return 3.0 * static_cast<double>(p); }

struct GroundTruth {
  Vector x1, x2, y1, y2, z1, z2;
  Tensor3 noise;  ///< unscaled standard Gaussian W

  const Vector& x(int i) const { return i == 0 ? x1 : x2; }
  const Vector& y(int i) const { return i == 0 ? y1 : y2; }
  const Vector& z(int i) const { return i == 0 ? z1 : z2; }
};

struct SpikedSample {
  Tensor3 tensor;
  GroundTruth truth;
};

/// Two unit vectors with inner product exactly alpha: the second is built
/// from the Gram-Schmidt residual of an independent Gaussian draw.
inline std::pair<Vector, Vector> correlated_pair(Rng& rng, Index p, double alpha) {
  Vector g1 = rng.normal_vector(p);
  Vector g2 = rng.normal_vector(p);
  Vector a = g1 / g1.norm();
  if (p == 1) return {a, a};
  Vector perp = g2 - g2.dot(a) * a;
  perp /= perp.norm();
  Vector b = alpha * a + std::sqrt(1.0 - alpha * alpha) * perp;
  b /= b.norm();
  return {a, b};
}

inline SpikedSample gen_spiked(const SpikedModel& model) {
  model.validate();
  const Index p = model.p;
  Rng rng(model.seed);
  auto [x1, x2] = correlated_pair(rng, p, model.alpha);
  auto [y1, y2] = correlated_pair(rng, p, model.alpha);
  auto [z1, z2] = correlated_pair(rng, p, model.alpha);

  Tensor3 noise(p);
  for (double& e : noise.data()) e = rng.normal();

  Tensor3 t = (1.0 / std::sqrt(noise_size(p))) * noise;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      const double c1 = model.beta1 * x1[i] * y1[j];
      const double c2 = model.beta2 * x2[i] * y2[j];
      Eigen::Map<Vector>(t.fibre(i, j), p) += c1 * z1 + c2 * z2;
    }
  }
  return {std::move(t), GroundTruth{std::move(x1), std::move(x2), std::move(y1), std::move(y2),
                                    std::move(z1), std::move(z2), std::move(noise)}};
}

}  // namespace tdefl
