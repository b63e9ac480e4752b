#pragma once

// Deterministic equations for the large-p limit of the two deflation steps.
//
// Unknown layouts:
//   first step   (lambda1, rho11, rho12)
//   second step  (lambda2, theta21, theta22, rho21, rho22, kappa, eta)

#include "tdefl/newton.hpp"
#include "tdefl/rtt.hpp"

#include <map>
#include <ostream>

namespace tdefl {

struct ModelParams {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double alpha = 0.0;

  double beta(int i) const { return i == 0 ? beta1 : beta2; }
  /// Correlation between component i and j (1 on the diagonal).
  double corr(int i, int j) const { return i == j ? 1.0 : alpha; }

  void validate() const {
    if (!(beta1 >= 0.0) || !(beta2 >= 0.0)) throw ParameterError("model: SNRs must be >= 0");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ParameterError("model: alpha must lie in [0, 1)");
  }
};

struct FirstStepSolution {
  double lambda1 = 0.0;
  double rho11 = 0.0;
  double rho12 = 0.0;
  double residual = 0.0;

  double rho(int i) const { return i == 0 ? rho11 : rho12; }
  Vector to_vector() const { return Vector{{lambda1, rho11, rho12}}; }
  static FirstStepSolution from_vector(const Vector& x) { return {x[0], x[1], x[2], 0.0}; }
};

struct SecondStepSolution {
  double lambda2 = 0.0;
  double theta21 = 0.0, theta22 = 0.0;
  double rho21 = 0.0, rho22 = 0.0;
  double kappa = 0.0;
  double eta = 0.0;
  double gamma = 1.0;
  double tau = -1.0;
  double residual = 0.0;
  bool degenerate = false;

  double theta(int i) const { return i == 0 ? theta21 : theta22; }
  double rho(int i) const { return i == 0 ? rho21 : rho22; }

  Vector to_vector() const { return Vector{{lambda2, theta21, theta22, rho21, rho22, kappa, eta}}; }
  static SecondStepSolution from_vector(const Vector& x, double gamma) {
    SecondStepSolution s;
    s.lambda2 = x[0];
    s.theta21 = x[1];
    s.theta22 = x[2];
    s.rho21 = x[3];
    s.rho22 = x[4];
    s.kappa = x[5];
    s.eta = x[6];
    s.gamma = gamma;
    return s;
  }
};

/// Deformation parameter of the second-step law.
inline double tau_of(double gamma, double kappa) { return gamma * kappa * kappa - 1.0 + kappa * (gamma - 1.0); }

// ---------------------------------------------------------------------------
// Residuals

inline Vector first_step_residual(const ModelParams& m, const Vector& x) {
  const double l1 = x[0];
  if (!(l1 > kSemicircleEdge)) {
    throw DomainError("first step: lambda1 = " + std::to_string(l1) +
                      " inside the bulk, recovery impossible regime");
  }
  const double r = r_semicircle(l1);
  const double h = -1.0 / r;
  const double rho[2] = {x[1], x[2]};
  Vector out(3);
  out[0] = l1 + r - (m.beta1 * std::pow(rho[0], 3) + m.beta2 * std::pow(rho[1], 3));
  for (int j = 0; j < 2; ++j) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i) s += m.beta(i) * m.corr(i, j) * rho[i] * rho[i];
    out[1 + j] = h * rho[j] - s;
  }
  return out;
}

/// (a, b) of the second-step law evaluated at lambda2.
struct SecondStepTransform {
  double a = 0.0;
  double b = 0.0;
  double q() const { return a + 2.0 * b; }
};

inline SecondStepTransform second_step_transform(double lambda2, double tau) {
  const StieltjesState s = stieltjes(Complex(lambda2, 0.0), tau);
  return {s.a.real(), s.b.real()};
}

inline Vector second_step_residual(const ModelParams& m, double gamma, const FirstStepSolution& first,
                                   const Vector& x, const SecondStepTransform& st) {
  const double l2 = x[0];
  const double th[2] = {x[1], x[2]};
  const double rh[2] = {x[3], x[4]};
  const double k = x[5];
  const double eta = x[6];
  const double r1 = r_semicircle(first.lambda1);
  const double rho1[2] = {first.rho11, first.rho12};
  const double a = st.a;
  const double b = st.b;
  const double fq = l2 + st.q();
  const double g = gamma;

  double s_th_rh2 = 0.0, s_r1_rh2 = 0.0, s_th_r1_rh = 0.0, s_r12_rh = 0.0;
  for (int i = 0; i < 2; ++i) {
    s_th_rh2 += m.beta(i) * th[i] * rh[i] * rh[i];
    s_r1_rh2 += m.beta(i) * rho1[i] * rh[i] * rh[i];
    s_th_r1_rh += m.beta(i) * th[i] * rho1[i] * rh[i];
    s_r12_rh += m.beta(i) * rho1[i] * rho1[i] * rh[i];
  }

  Vector out(7);
  out[0] = fq - g * k * eta * eta / 3.0 * r1 - 2.0 * g * k * k * b - (s_th_rh2 - g * k * s_r1_rh2);
  for (int j = 0; j < 2; ++j) {
    double s = 0.0;
    for (int i = 0; i < 2; ++i) s += m.beta(i) * m.corr(i, j) * rh[i] * rh[i];
    out[1 + j] = (fq - a) * th[j] - g * rho1[j] * (eta * eta / 3.0 * r1 + 2.0 * k * b) - (s - g * rho1[j] * s_r1_rh2);
  }
  out[3] = (l2 + 2.0 * (1.0 - g) * b) * k - (1.0 - g) * (s_r1_rh2 - eta * eta / 3.0 * r1);
  for (int j = 0; j < 2; ++j) {
    double s_th = 0.0, s_r1 = 0.0;
    for (int i = 0; i < 2; ++i) {
      s_th += m.beta(i) * th[i] * rh[i] * m.corr(i, j);
      s_r1 += m.beta(i) * rho1[i] * rh[i] * m.corr(i, j);
    }
    out[4 + j] = (fq - (1.0 + g * k * k) * b) * rh[j] - (s_th - g * k * (s_r1 - rho1[j] * eta * r1 / 3.0));
  }
  out[6] = (l2 + a + (1.0 - g * k * k) * b - g * k / 3.0 * r1) * eta - (s_th_r1_rh - g * k * s_r12_rh);
  return out;
}

/// Residual of the gamma = 1 system, unknowns (lambda2, theta21, theta22, rho21, rho22, eta).
inline Vector gamma1_residual(const ModelParams& m, const FirstStepSolution& first, const Vector& x) {
  const double l2 = x[0];
  if (!(l2 > kSemicircleEdge)) throw DomainError("second step: lambda2 inside the semicircle bulk");
  const double th[2] = {x[1], x[2]};
  const double rh[2] = {x[3], x[4]};
  const double eta = x[5];
  const double r1 = r_semicircle(first.lambda1);
  const double r2 = r_semicircle(l2);
  const double h2 = -1.0 / r2;
  const double rho1[2] = {first.rho11, first.rho12};

  double s_th_rh2 = 0.0, s_r1_rh2 = 0.0, s_th_r1_rh = 0.0;
  for (int i = 0; i < 2; ++i) {
    s_th_rh2 += m.beta(i) * th[i] * rh[i] * rh[i];
    s_r1_rh2 += m.beta(i) * rho1[i] * rh[i] * rh[i];
    s_th_r1_rh += m.beta(i) * th[i] * rho1[i] * rh[i];
  }
  Vector out(6);
  out[0] = l2 + r2 - s_th_rh2;
  for (int j = 0; j < 2; ++j) {
    double s = 0.0, s_th = 0.0;
    for (int i = 0; i < 2; ++i) {
      s += m.beta(i) * m.corr(i, j) * rh[i] * rh[i];
      s_th += m.beta(i) * th[i] * rh[i] * m.corr(i, j);
    }
    out[1 + j] = h2 * th[j] - eta * eta / 3.0 * r1 * rho1[j] - s + rho1[j] * s_r1_rh2;
    out[3 + j] = h2 * rh[j] - s_th;
  }
  out[5] = (l2 + 2.0 / 3.0 * r2) * eta - s_th_r1_rh;
  return out;
}

// ---------------------------------------------------------------------------
// Solvers

namespace detail {

inline void check_alignment_box(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!(std::abs(v) <= 1.0 + 1e-9)) {
      throw DomainError(std::string(what) + ": alignment " + std::to_string(v) + " outside [-1, 1]");
    }
  }
}

/// Components with zero SNR in the orthogonal model carry no signal at all.
inline bool pinned(const ModelParams& m, int i) { return m.beta(i) == 0.0 && m.alpha == 0.0; }

// Newton pushed lambda2 onto the edge and could not go further: no outlier.
inline bool stalled_at_edge(const StagnationError& e, double edge) { return e.last()[0] < edge + 1e-3; }

}  // namespace detail

inline FirstStepSolution solve_first(const ModelParams& m, const FirstStepSolution& init, const SolverConfig& cfg = {}) {
  m.validate();
  if (!(init.lambda1 > kSemicircleEdge)) {
    throw DomainError("solve_first: initial lambda1 inside the bulk, recovery impossible regime");
  }
  const bool pin[2] = {detail::pinned(m, 0), detail::pinned(m, 1)};
  ResidualFn f = [&](const Vector& x) {
    Vector r = first_step_residual(m, x);
    for (int i = 0; i < 2; ++i)
      if (pin[i]) r[1 + i] = x[1 + i];
    return r;
  };
  Vector x0 = init.to_vector();
  for (int i = 0; i < 2; ++i)
    if (pin[i]) x0[1 + i] = 0.0;
  NewtonResult nr;
  try {
    nr = newton_solve(f, x0, cfg);
  } catch (const DomainError& e) {
    throw DomainError(std::string("solve_first: ") + e.what());
  }
  FirstStepSolution s = FirstStepSolution::from_vector(nr.x);
  if (!(s.lambda1 > kSemicircleEdge)) throw DomainError("solve_first: lambda1 inside the bulk, recovery impossible regime");
  detail::check_alignment_box({s.rho11, s.rho12}, "solve_first");
  s.residual = first_step_residual(m, nr.x).lpNorm<Eigen::Infinity>();
  return s;
}

/// Caches the right support edge of nu_tau per tau value.
class EdgeCache {
 public:
  double operator()(double tau) {
    auto it = cache_.find(tau);
    if (it != cache_.end()) return it->second;
    const double e = tau == -1.0 ? kSemicircleEdge : support_right_edge(tau);
    cache_.emplace(tau, e);
    return e;
  }

 private:
  std::map<double, double> cache_;
};

inline EdgeCache& thread_edge_cache() {
  thread_local EdgeCache cache;
  return cache;
}

/// Joint residual of the general system at the tau implied by the unknowns.
inline Vector second_step_joint_residual(const ModelParams& m, double gamma, const FirstStepSolution& first,
                                         const Vector& x) {
  const double tau = tau_of(gamma, x[5]);
  if (!(x[0] > thread_edge_cache()(tau))) throw DomainError("second step: lambda2 inside supp(nu)");
  return second_step_residual(m, gamma, first, x, second_step_transform(x[0], tau));
}

inline SecondStepSolution finish_second(const ModelParams& m, SecondStepSolution s, double tau, double residual) {
  s.tau = tau;
  s.residual = residual;
  s.degenerate = m.beta1 == 0.0 || m.beta2 == 0.0;
  detail::check_alignment_box({s.theta21, s.theta22, s.rho21, s.rho22, s.kappa, s.eta}, "second step");
  return s;
}

/// Alternates Newton on the seven equations at fixed tau with refreshes of tau
/// from the current kappa, until the joint residual drops below cfg.outer_tol.
inline SecondStepSolution solve_second(const ModelParams& m, double gamma, const FirstStepSolution& first,
                                       const SecondStepSolution& init, const SolverConfig& cfg = {}) {
  m.validate();
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("solve_second: gamma must lie in [0, 1]");
  EdgeCache& edges = thread_edge_cache();
  {
    const double tau0 = tau_of(gamma, init.kappa);
    if (!(init.lambda2 > edges(tau0))) {
      throw DomainError("solve_second: initial lambda2 inside supp(nu), recovery impossible regime");
    }
  }
  const bool pin[2] = {detail::pinned(m, 0), detail::pinned(m, 1)};
  Vector x = init.to_vector();
  for (int i = 0; i < 2; ++i)
    if (pin[i]) x[1 + i] = x[3 + i] = 0.0;

  SolverConfig inner = cfg;
  inner.tol = std::min(cfg.tol, 0.1 * cfg.outer_tol);
  double joint = std::numeric_limits<double>::infinity();
  double tau = tau_of(gamma, x[5]);
  for (int outer = 0; outer < cfg.outer_max; ++outer) {
    tau = tau_of(gamma, x[5]);
    const double edge = edges(tau);
    ResidualFn f = [&, tau, edge](const Vector& y) {
      if (!(y[0] > edge)) throw DomainError("second step: lambda2 inside supp(nu)");
      Vector r = second_step_residual(m, gamma, first, y, second_step_transform(y[0], tau));
      for (int i = 0; i < 2; ++i) {
        if (pin[i]) {
          r[1 + i] = y[1 + i];
          r[4 + i] = y[3 + i];
        }
      }
      return r;
    };
    try {
      x = newton_solve(f, x, inner).x;
    } catch (const DomainError& e) {
      throw DomainError(std::string("solve_second: ") + e.what() + ", recovery impossible regime");
    } catch (const StagnationError& e) {
      if (detail::stalled_at_edge(e, edge)) {
        throw DomainError("solve_second: Newton stalled at the support edge, recovery impossible regime");
      }
      throw;
    }
    Vector r = second_step_joint_residual(m, gamma, first, x);
    for (int i = 0; i < 2; ++i) {
      if (pin[i]) {
        r[1 + i] = x[1 + i];
        r[4 + i] = x[3 + i];
      }
    }
    joint = r.lpNorm<Eigen::Infinity>();
    if (joint < cfg.outer_tol) break;
  }
  if (!(joint < cfg.outer_tol)) {
    throw ConvergenceError("solve_second: tau alternation did not converge (joint residual " +
                               std::to_string(joint) + ")",
                           {joint});
  }
  tau = tau_of(gamma, x[5]);
  if (!(x[0] > edges(tau) + 1e-6)) {
    throw DomainError("solve_second: lambda2 inside supp(nu), recovery impossible regime");
  }
  return finish_second(m, SecondStepSolution::from_vector(x, gamma), tau, joint);
}

/// gamma = 1 system with kappa = 0 and the semicircle transform.
inline SecondStepSolution solve_second_gamma1(const ModelParams& m, const FirstStepSolution& first,
                                              const SecondStepSolution& init, const SolverConfig& cfg = {}) {
  m.validate();
  if (!(init.lambda2 > kSemicircleEdge)) {
    throw DomainError("solve_second_gamma1: initial lambda2 inside the bulk, recovery impossible regime");
  }
  const bool pin[2] = {detail::pinned(m, 0), detail::pinned(m, 1)};
  ResidualFn f = [&](const Vector& y) {
    Vector r = gamma1_residual(m, first, y);
    for (int i = 0; i < 2; ++i) {
      if (pin[i]) {
        r[1 + i] = y[1 + i];
        r[3 + i] = y[3 + i];
      }
    }
    return r;
  };
  Vector x0{{init.lambda2, init.theta21, init.theta22, init.rho21, init.rho22, init.eta}};
  for (int i = 0; i < 2; ++i)
    if (pin[i]) x0[1 + i] = x0[3 + i] = 0.0;
  NewtonResult nr;
  try {
    nr = newton_solve(f, x0, cfg);
  } catch (const DomainError& e) {
    throw DomainError(std::string("solve_second_gamma1: ") + e.what() + ", recovery impossible regime");
  } catch (const StagnationError& e) {
    if (detail::stalled_at_edge(e, kSemicircleEdge)) {
      throw DomainError("solve_second_gamma1: Newton stalled at the support edge, recovery impossible regime");
    }
    throw;
  }
  const Vector& y = nr.x;
  if (!(y[0] > kSemicircleEdge + 1e-6)) {
    throw DomainError("solve_second_gamma1: lambda2 inside the bulk, recovery impossible regime");
  }
  SecondStepSolution s;
  s.lambda2 = y[0];
  s.theta21 = y[1];
  s.theta22 = y[2];
  s.rho21 = y[3];
  s.rho22 = y[4];
  s.kappa = 0.0;
  s.eta = y[5];
  s.gamma = 1.0;
  return finish_second(m, s, -1.0, gamma1_residual(m, first, y).lpNorm<Eigen::Infinity>());
}

// ---------------------------------------------------------------------------
// Sweep export

struct SweepRow {
  ModelParams model;
  double gamma = 1.0;
  std::optional<FirstStepSolution> first;
  std::optional<SecondStepSolution> second;
  std::string status = "ok";
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "beta1,beta2,alpha,gamma,lambda1,rho11,rho12,lambda2,theta21,theta22,rho21,rho22,kappa,eta,tau,"
        "residual_first,residual_second,status\n";
  char buf[512];
  for (const SweepRow& r : rows) {
    const FirstStepSolution f = r.first.value_or(FirstStepSolution{NAN, NAN, NAN, NAN});
    SecondStepSolution s;
    if (r.second) {
      s = *r.second;
    } else {
      s.lambda2 = s.theta21 = s.theta22 = s.rho21 = s.rho22 = s.kappa = s.eta = s.tau = s.residual = NAN;
    }
    std::snprintf(buf, sizeof buf,
                  "%.6g,%.6g,%.6g,%.6g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.3e,%.3e,%s\n",
                  r.model.beta1, r.model.beta2, r.model.alpha, r.gamma, f.lambda1, f.rho11, f.rho12, s.lambda2,
                  s.theta21, s.theta22, s.rho21, s.rho22, s.kappa, s.eta, s.tau, f.residual, s.residual,
                  r.status.c_str());
    os << buf;
  }
}

}  // namespace tdefl
