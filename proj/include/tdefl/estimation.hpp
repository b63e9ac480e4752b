#pragma once

// Recovering (beta1, beta2, alpha) and the six alignments from the observable
// triple (lambda1_hat, lambda2_hat, eta_hat) of a single realisation.

#include "tdefl/asymptotics.hpp"

#include <array>
#include <optional>

namespace tdefl {

struct Observables {
  double lambda1_hat = 0.0;
  double lambda2_hat = 0.0;
  double eta_hat = 0.0;

  void validate() const {
    if (!(lambda1_hat > kSemicircleEdge)) {
      throw DomainError("estimation refused: lambda1_hat = " + std::to_string(lambda1_hat) +
                        " does not exceed the bulk edge 2 sqrt(2/3)");
    }
    if (!(lambda2_hat > kSemicircleEdge)) {
      throw DomainError("estimation refused: lambda2_hat = " + std::to_string(lambda2_hat) +
                        " does not exceed the bulk edge 2 sqrt(2/3)");
    }
    if (!(eta_hat >= 0.0 && eta_hat <= 1.0)) throw ParameterError("estimation: eta_hat must lie in [0, 1]");
  }
};

/// Alignment vector layout: (rho11, rho12, theta21, theta22, rho21, rho22).
using Alignments6 = std::array<double, 6>;

struct ModelEstimate {
  double beta1_hat = 0.0;
  double beta2_hat = 0.0;
  double alpha_hat = 0.0;
  Alignments6 rho_hat{};
  double residual_norm = 0.0;
  bool swapped = false;
  std::vector<std::string> warnings;

  ModelParams model() const { return {beta1_hat, beta2_hat, alpha_hat}; }
  FirstStepSolution first(double lambda1) const { return {lambda1, rho_hat[0], rho_hat[1], 0.0}; }
  /// alpha_hat clamped into [0, 1) for reports only.
  double alpha_report() const { return std::clamp(alpha_hat, 0.0, std::nextafter(1.0, 0.0)); }
};

class EstimationError : public ConvergenceError {
 public:
  EstimationError(const std::string& what, double residual) : ConvergenceError(what, {residual}) {}
  double last_residual() const { return residuals().empty() ? NAN : residuals().front(); }
};

/// The nine residuals: first-step system, then the gamma = 1 second-step system.
inline Vector psi(const std::array<double, 3>& beta, const std::array<double, 3>& lambda, const Alignments6& rho) {
  const ModelParams m{beta[0], beta[1], beta[2]};
  const Vector a = first_step_residual(m, Vector{{lambda[0], rho[0], rho[1]}});
  const FirstStepSolution first{lambda[0], rho[0], rho[1], 0.0};
  const Vector b = gamma1_residual(m, first, Vector{{lambda[1], rho[2], rho[3], rho[4], rho[5], lambda[2]}});
  Vector out(9);
  out << a, b;
  return out;
}

struct EstimateInit {
  std::array<double, 3> beta0{};
  Alignments6 rho0{};
};

inline EstimateInit default_estimate_init(const Observables& obs) {
  const double a0 = obs.eta_hat;
  return {{obs.lambda1_hat, obs.lambda1_hat / 2.0, a0}, {0.9, 0.9 * a0, 0.3, 0.7, 0.3, 0.7}};
}

inline ModelEstimate estimate(const Observables& obs, const std::optional<EstimateInit>& init = std::nullopt,
                              const SolverConfig& cfg = {}) {
  obs.validate();
  const EstimateInit start = init.value_or(default_estimate_init(obs));
  const std::array<double, 3> lam = {obs.lambda1_hat, obs.lambda2_hat, obs.eta_hat};
  auto unpack = [](const Vector& y, std::array<double, 3>& beta, Alignments6& rho) {
    for (int i = 0; i < 3; ++i) beta[static_cast<std::size_t>(i)] = y[i];
    for (int i = 0; i < 6; ++i) rho[static_cast<std::size_t>(i)] = y[3 + i];
  };
  ResidualFn f = [&](const Vector& y) {
    std::array<double, 3> beta;
    Alignments6 rho;
    unpack(y, beta, rho);
    return psi(beta, lam, rho);
  };
  Vector y0(9);
  for (int i = 0; i < 3; ++i) y0[i] = start.beta0[static_cast<std::size_t>(i)];
  for (int i = 0; i < 6; ++i) y0[3 + i] = start.rho0[static_cast<std::size_t>(i)];

  NewtonResult nr;
  try {
    nr = newton_solve(f, y0, cfg);
  } catch (const SingularityError& e) {
    throw EstimationError(std::string("estimate: ") + e.what(), f(e.last()).lpNorm<Eigen::Infinity>());
  } catch (const StagnationError& e) {
    throw EstimationError(std::string("estimate: ") + e.what(), e.residuals().front());
  } catch (const ConvergenceError& e) {
    throw EstimationError(std::string("estimate: ") + e.what(), e.residuals().empty() ? NAN : e.residuals().front());
  }

  std::array<double, 3> beta;
  Alignments6 rho;
  unpack(nr.x, beta, rho);
  ModelEstimate est;
  if (beta[1] > beta[0]) {
    std::swap(beta[0], beta[1]);
    std::swap(rho[0], rho[1]);
    std::swap(rho[2], rho[3]);
    std::swap(rho[4], rho[5]);
    est.swapped = true;
  }
  est.beta1_hat = beta[0];
  est.beta2_hat = beta[1];
  est.alpha_hat = beta[2];
  est.rho_hat = rho;
  est.residual_norm = psi(beta, lam, rho).lpNorm<Eigen::Infinity>();
  if (!(est.alpha_hat >= 0.0 && est.alpha_hat < 1.0)) {
    est.warnings.push_back("alpha_hat = " + std::to_string(est.alpha_hat) + " outside [0, 1): out of model");
  }
  if (est.beta2_hat < 0.0) est.warnings.push_back("beta2_hat negative: out of model");
  return est;
}

}  // namespace tdefl
