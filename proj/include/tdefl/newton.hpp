#pragma once

// Damped Newton iteration for small square nonlinear systems with a
// central-difference Jacobian.

#include "tdefl/core.hpp"

#include <functional>
#include <optional>

namespace tdefl {

using ResidualFn = std::function<Vector(const Vector&)>;

struct SolverConfig {
  double tol = 1e-12;        // target on |F|_inf
  int max_iter = 100;
  int max_halvings = 30;
  double fd_step = 1e-7;     // relative finite-difference step
  double rank_tol = 1e-13;   // QR pivot threshold relative to the largest pivot
  int outer_max = 60;        // cap on tau refreshes for the second-step solver
  double outer_tol = 1e-9;   // joint residual target of the second-step solver

  void validate() const {
    if (!(tol > 0.0) || !(outer_tol > 0.0)) throw ParameterError("solver: tolerances must be > 0");
    if (max_iter < 1 || outer_max < 1) throw ParameterError("solver: iteration caps must be >= 1");
  }
};

class SingularityError : public NumericError {
 public:
  SingularityError(const std::string& what, Vector x) : NumericError(what), x_(std::move(x)) {}
  const Vector& last() const noexcept { return x_; }

 private:
  Vector x_;
};

class StagnationError : public ConvergenceError {
 public:
  StagnationError(const std::string& what, Vector x, double residual)
      : ConvergenceError(what, {residual}), x_(std::move(x)) {}
  const Vector& last() const noexcept { return x_; }

 private:
  Vector x_;
};

struct NewtonResult {
  Vector x;
  double residual = 0.0;
  int iterations = 0;
};

namespace detail {

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline std::optional<Vector> try_eval(const ResidualFn& f, const Vector& x) {
  try {
    Vector r = f(x);
    if (!all_finite(r)) return std::nullopt;
    return r;
  } catch (const DomainError&) {
    return std::nullopt;
  } catch (const NumericError&) {
    return std::nullopt;
  } catch (const ConvergenceError&) {
    return std::nullopt;
  }
}

inline Matrix fd_jacobian(const ResidualFn& f, const Vector& x, const Vector& fx, double rel_step) {
  const Index n = x.size();
  Matrix j(fx.size(), n);
  for (Index i = 0; i < n; ++i) {
    const double h = rel_step * (1.0 + std::abs(x[i]));
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    auto fp = try_eval(f, xp);
    auto fm = try_eval(f, xm);
    if (fp && fm) {
      j.col(i) = (*fp - *fm) / (2.0 * h);
    } else if (fp) {
      j.col(i) = (*fp - fx) / h;
    } else if (fm) {
      j.col(i) = (fx - *fm) / h;
    } else {
      throw DomainError("newton: residual undefined on both sides of coordinate " + std::to_string(i));
    }
  }
  return j;
}

}  // namespace detail

inline NewtonResult newton_solve(const ResidualFn& f, const Vector& x0, const SolverConfig& cfg = {}) {
  cfg.validate();
  Vector x = x0;
  Vector fx = f(x);
  if (!detail::all_finite(fx)) throw NumericError("newton: residual not finite at the initial point");
  if (fx.size() != x.size()) throw DimensionError("newton: system must be square");
  double norm = fx.lpNorm<Eigen::Infinity>();

  for (int it = 0; it < cfg.max_iter; ++it) {
    if (norm < cfg.tol) return {x, norm, it};
    const Matrix jac = detail::fd_jacobian(f, x, fx, cfg.fd_step);
    Eigen::ColPivHouseholderQR<Matrix> qr(jac);
    qr.setThreshold(cfg.rank_tol);
    if (qr.rank() < x.size()) {
      throw SingularityError("newton: Jacobian rank " + std::to_string(qr.rank()) + " < " +
                                 std::to_string(x.size()),
                             x);
    }
    const Vector dx = qr.solve(-fx);
    double t = 1.0;
    bool accepted = false;
    const double merit = fx.squaredNorm();
    for (int h = 0; h <= cfg.max_halvings; ++h, t *= 0.5) {
      const Vector xn = x + t * dx;
      auto fn = detail::try_eval(f, xn);
      if (fn && fn->squaredNorm() < merit) {
        x = xn;
        fx = std::move(*fn);
        norm = fx.lpNorm<Eigen::Infinity>();
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw StagnationError("newton: no residual decrease (|F|_inf = " + std::to_string(norm) + ")", x, norm);
    }
  }
  if (norm < cfg.tol) return {x, norm, cfg.max_iter};
  throw ConvergenceError("newton: no convergence after " + std::to_string(cfg.max_iter) +
                             " iterations (|F|_inf = " + std::to_string(norm) + ")",
                         {norm});
}

}  // namespace tdefl
