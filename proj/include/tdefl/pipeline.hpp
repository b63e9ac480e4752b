#pragma once

// Two-step orthogonalised deflation on a concrete tensor, alignment
// measurement against planted components, and the improved deflation that
// tunes the projection strength gamma from the asymptotic equations.

#include "tdefl/estimation.hpp"
#include "tdefl/rank_one.hpp"
#include "tdefl/spiked.hpp"

#include <array>
#include <optional>

namespace tdefl {

struct AlignmentRecord {
  // index i refers to the planted component i
  std::array<double, 2> rho1_u{}, rho1_v{}, rho1_w{};  // first factor
  std::array<double, 2> theta2{};                      // |<u2, x_i>|
  std::array<double, 2> rho2_v{}, rho2_w{};            // |<v2, y_i>|, |<w2, z_i>|
  double kappa = 0.0;                                  // |<u1, u2>|
  double eta_v = 0.0, eta_w = 0.0;                     // |<v1, v2>|, |<w1, w2>|

  /// Largest disagreement between quantities that share a limit.
  double mode_spread() const {
    double s = std::abs(eta_v - eta_w);
    for (int i = 0; i < 2; ++i) {
      const double hi = std::max({rho1_u[i], rho1_v[i], rho1_w[i]});
      const double lo = std::min({rho1_u[i], rho1_v[i], rho1_w[i]});
      s = std::max({s, hi - lo, std::abs(rho2_v[i] - rho2_w[i])});
    }
    return s;
  }
};

inline AlignmentRecord measure_alignments(const Vector& u1, const Vector& v1, const Vector& w1, const Vector& u2,
                                          const Vector& v2, const Vector& w2, const GroundTruth& truth) {
  require_same_dim(truth.x1.size(), u1.size(), "measure_alignments");
  AlignmentRecord a;
  for (int i = 0; i < 2; ++i) {
    a.rho1_u[i] = std::abs(u1.dot(truth.x(i)));
    a.rho1_v[i] = std::abs(v1.dot(truth.y(i)));
    a.rho1_w[i] = std::abs(w1.dot(truth.z(i)));
    a.theta2[i] = std::abs(u2.dot(truth.x(i)));
    a.rho2_v[i] = std::abs(v2.dot(truth.y(i)));
    a.rho2_w[i] = std::abs(w2.dot(truth.z(i)));
  }
  a.kappa = std::abs(u1.dot(u2));
  a.eta_v = std::abs(v1.dot(v2));
  a.eta_w = std::abs(w1.dot(w2));
  return a;
}

inline AlignmentRecord measure_alignments(const RankOneFactor& f1, const RankOneFactor& f2, const GroundTruth& truth) {
  return measure_alignments(f1.u, f1.v, f1.w, f2.u, f2.v, f2.w, truth);
}

struct DeflationConfig {
  PowerIterConfig power;
};

struct DeflationRun {
  double gamma = 1.0;
  RankOneFactor factor1, factor2;
  double kappa_hat = 0.0;  // |<u1, u2>|
  double eta_hat = 0.0;    // |<v1, v2>|
  std::optional<AlignmentRecord> alignments;
};

inline DeflationRun deflate(const Tensor3& t, double gamma, const GroundTruth* truth = nullptr,
                            const DeflationConfig& cfg = {}) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("deflate: gamma must lie in [0, 1]");
  DeflationRun run;
  run.gamma = gamma;
  run.factor1 = power_iteration(t, cfg.power);
  const Tensor3 t2 = project_mode(t, run.factor1.u, gamma, Mode::One);
  run.factor2 = power_iteration(t2, cfg.power);
  run.kappa_hat = std::abs(run.factor1.u.dot(run.factor2.u));
  run.eta_hat = std::abs(run.factor1.v.dot(run.factor2.v));
  if (truth) run.alignments = measure_alignments(run.factor1, run.factor2, *truth);
  return run;
}

// ---------------------------------------------------------------------------
// Component assignment

struct ComponentMatch {
  std::array<int, 2> component{0, 1};  // planted component matched to factor f
  std::array<double, 2> alignment_u{}, alignment_v{}, alignment_w{};
};

/// Matches two factor triples to the planted components by the permutation
/// with the largest summed absolute alignment; ties keep SNR order.
inline ComponentMatch match_components(const std::array<const Vector*, 3>& f1, const std::array<const Vector*, 3>& f2,
                                       const GroundTruth& truth) {
  auto score = [&](const std::array<const Vector*, 3>& f, int i) {
    return std::abs(f[0]->dot(truth.x(i))) + std::abs(f[1]->dot(truth.y(i))) + std::abs(f[2]->dot(truth.z(i)));
  };
  const double keep = score(f1, 0) + score(f2, 1);
  const double swap = score(f1, 1) + score(f2, 0);
  ComponentMatch m;
  if (swap > keep) m.component = {1, 0};
  const std::array<const std::array<const Vector*, 3>*, 2> fs = {&f1, &f2};
  for (int f = 0; f < 2; ++f) {
    const int i = m.component[static_cast<std::size_t>(f)];
    m.alignment_u[f] = std::abs((*fs[f])[0]->dot(truth.x(i)));
    m.alignment_v[f] = std::abs((*fs[f])[1]->dot(truth.y(i)));
    m.alignment_w[f] = std::abs((*fs[f])[2]->dot(truth.z(i)));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Signed measurements for seeding the asymptotic solvers

/// Flips (v, w) so that their inner products with the component that v
/// aligns with best are nonnegative, compensating in u so that the rank-one
/// tensor is unchanged.
inline void canonical_signs(Vector& u, Vector& v, Vector& w, const GroundTruth& truth) {
  const int k = std::abs(v.dot(truth.y2)) > std::abs(v.dot(truth.y1)) ? 1 : 0;
  const double sv = v.dot(truth.y(k)) < 0.0 ? -1.0 : 1.0;
  const double sw = w.dot(truth.z(k)) < 0.0 ? -1.0 : 1.0;
  v *= sv;
  w *= sw;
  u *= sv * sw;
}

struct SignedMeasurement {
  FirstStepSolution first;
  SecondStepSolution second;
};

inline SignedMeasurement signed_measurement(const DeflationRun& run, const GroundTruth& truth) {
  Vector u1 = run.factor1.u, v1 = run.factor1.v, w1 = run.factor1.w;
  Vector u2 = run.factor2.u, v2 = run.factor2.v, w2 = run.factor2.w;
  canonical_signs(u1, v1, w1, truth);
  canonical_signs(u2, v2, w2, truth);
  SignedMeasurement s;
  s.first = {run.factor1.lambda, u1.dot(truth.x1), u1.dot(truth.x2), 0.0};
  s.second.lambda2 = run.factor2.lambda;
  s.second.theta21 = u2.dot(truth.x1);
  s.second.theta22 = u2.dot(truth.x2);
  s.second.rho21 = v2.dot(truth.y1);
  s.second.rho22 = v2.dot(truth.y2);
  s.second.kappa = u1.dot(u2);
  s.second.eta = v1.dot(v2);
  s.second.gamma = run.gamma;
  s.second.tau = tau_of(run.gamma, s.second.kappa);
  return s;
}

/// One simulated deflation at the requested parameters, read back as solver seeds.
inline SignedMeasurement simulated_initializer(const ModelParams& m, double gamma, Index p = 100,
                                               std::uint64_t seed = 0) {
  const SpikedSample s = gen_spiked({p, m.beta1, m.beta2, m.alpha, seed});
  return signed_measurement(deflate(s.tensor, gamma), s.truth);
}

// ---------------------------------------------------------------------------
// Improved deflation

struct ComponentEstimate {
  double beta = 0.0;
  Vector u, v, w;
};

struct SweepPoint {
  double gamma = 1.0;
  double value = 0.0;        // predicted max{rho21, rho22}
  int tracked = 1;           // which of rho21 (0) / rho22 (1) attains it
  SecondStepSolution solution;
};

struct ImprovedConfig {
  DeflationConfig deflation;
  SolverConfig solver;
  double kappa_seed = 1e-5;
};

struct ImprovedResult {
  double gamma_star = 1.0;
  std::optional<ModelEstimate> estimates;
  DeflationRun baseline;
  std::array<ComponentEstimate, 2> components;  // strongest SNR first
  std::vector<SweepPoint> sweep_trace;
  std::vector<std::string> warnings;
  bool aborted = false;
};

namespace detail {

inline ImprovedResult fallback_to_baseline(ImprovedResult res, const std::string& why) {
  res.aborted = true;
  res.gamma_star = 1.0;
  res.warnings.push_back(why);
  const RankOneFactor& f1 = res.baseline.factor1;
  const RankOneFactor& f2 = res.baseline.factor2;
  res.components[0] = {f1.lambda, f1.u, f1.v, f1.w};
  res.components[1] = {f2.lambda, f2.u, f2.v, f2.w};
  return res;
}

}  // namespace detail

inline ImprovedResult improved_deflation(const Tensor3& t, double eps_step = 0.02, const ImprovedConfig& cfg = {}) {
  if (!(eps_step > 0.0 && eps_step <= 0.2)) throw ParameterError("improved_deflation: eps_step must lie in (0, 0.2]");
  ImprovedResult res;
  // plain orthogonalised deflation
  res.baseline = deflate(t, 1.0, nullptr, cfg.deflation);
  const RankOneFactor& f1 = res.baseline.factor1;
  const RankOneFactor& f2 = res.baseline.factor2;
  // model estimate from the observables
  const Observables obs{f1.lambda, f2.lambda, std::abs(f1.v.dot(f2.v))};
  try {
    res.estimates = estimate(obs, std::nullopt, cfg.solver);
  } catch (const Error& e) {
    return detail::fallback_to_baseline(std::move(res), std::string("estimation failed: ") + e.what());
  }
  const ModelEstimate& est = *res.estimates;
  for (const auto& w : est.warnings) res.warnings.push_back(w);

  ModelParams model{std::max(est.beta1_hat, 0.0), std::max(est.beta2_hat, 0.0), est.alpha_report()};
  if (model.alpha != est.alpha_hat || model.beta2 != est.beta2_hat) {
    res.warnings.push_back("sweep uses the estimate clamped into the model range");
  }
  const FirstStepSolution first = est.first(obs.lambda1_hat);

  // walk gamma down from 1 until the predicted alignment peaks
  SecondStepSolution x;
  x.lambda2 = obs.lambda2_hat;
  x.theta21 = est.rho_hat[2];
  x.theta22 = est.rho_hat[3];
  x.rho21 = est.rho_hat[4];
  x.rho22 = est.rho_hat[5];
  x.kappa = cfg.kappa_seed;
  x.eta = obs.eta_hat;
  constexpr double kFlat = 1e-8;
  int decreases = 0;
  bool reached_max = false;
  for (int k = 0;; ++k) {
    const double gamma = 1.0 - k * eps_step;
    if (gamma <= 1e-12) break;
    try {
      x = solve_second(model, gamma, first, x, cfg.solver);
    } catch (const Error& e) {
      if (res.sweep_trace.empty()) {
        return detail::fallback_to_baseline(std::move(res), std::string("sweep failed at gamma = 1: ") + e.what());
      }
      res.warnings.push_back("sweep stopped at gamma = " + std::to_string(gamma) + ": " + e.what());
      reached_max = true;
      break;
    }
    SweepPoint pt;
    pt.gamma = gamma;
    const double r21 = std::abs(x.rho21), r22 = std::abs(x.rho22);
    pt.tracked = r22 >= r21 ? 1 : 0;
    pt.value = std::max(r21, r22);
    pt.solution = x;
    // gains below the solver accuracy count as flat, so a flat curve stops near gamma = 1
    if (!res.sweep_trace.empty()) decreases = pt.value <= res.sweep_trace.back().value + kFlat ? decreases + 1 : 0;
    res.sweep_trace.push_back(pt);
    if (decreases >= 2) {
      reached_max = true;
      break;
    }
  }
  if (!reached_max) res.warnings.push_back("sweep reached gamma = 0 without passing a maximum");
  std::size_t best = 0;
  for (std::size_t i = 1; i < res.sweep_trace.size(); ++i)
    if (res.sweep_trace[i].value > res.sweep_trace[best].value + kFlat) best = i;
  res.gamma_star = res.sweep_trace[best].gamma;

  // second component from the two partial projections
  const RankOneFactor g13 = power_iteration(project_mode(t, f1.u, res.gamma_star, Mode::One), cfg.deflation.power);
  const RankOneFactor g14 = power_iteration(project_mode(t, f1.v, res.gamma_star, Mode::Two), cfg.deflation.power);
  Vector u2s = g14.u;
  const Vector& v2s = g13.v;
  const Vector& w2s = g13.w;
  if (contract3(t, u2s, v2s, w2s) < 0.0) u2s = -u2s;

  // refit the first component with the second one removed
  const double beta_min = std::min(est.beta1_hat, est.beta2_hat);
  const double beta_max = std::max(est.beta1_hat, est.beta2_hat);
  const RankOneFactor g15 = power_iteration(t - beta_min * outer3(u2s, v2s, w2s), cfg.deflation.power);
  res.components[0] = {beta_max, g15.u, g15.v, g15.w};
  res.components[1] = {beta_min, u2s, v2s, w2s};
  return res;
}

}  // namespace tdefl
