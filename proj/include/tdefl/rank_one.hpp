#pragma once

// Best rank-one approximation of an order-3 tensor by alternating power
// iteration, initialised from the leading singular vectors of the three
// unfoldings.

#include "tdefl/eigen_sym.hpp"
#include "tdefl/tensor.hpp"

#include <optional>
#include <variant>

namespace tdefl {

struct RankOneFactor {
  double lambda = 0.0;
  Vector u, v, w;
  int iterations = 0;
  bool converged = false;
};

namespace init {
struct Svd {};
struct Given {
  Vector u, v, w;
};
struct Random {
  std::uint64_t seed = 0;
};
}  // namespace init

using PowerInit = std::variant<init::Svd, init::Given, init::Random>;

struct PowerIterConfig {
  double tol = 1e-10;
  int max_iter = 1000;
  PowerInit init = init::Svd{};

  void validate() const {
    if (!(tol > 0.0)) throw ParameterError("power iteration: tol must be > 0");
    if (max_iter < 1) throw ParameterError("power iteration: max_iter must be >= 1");
  }
};

class PowerIterationError : public ConvergenceError {
 public:
  PowerIterationError(const std::string& what, std::vector<double> residuals, RankOneFactor last)
      : ConvergenceError(what, std::move(residuals)), last_(std::move(last)) {}
  const RankOneFactor& last() const noexcept { return last_; }

 private:
  RankOneFactor last_;
};

/// Gram matrix X X^T of the unfolding along `mode`.
inline Matrix unfolding_gram(const Tensor3& t, Mode mode) {
  const Index p = t.dim();
  Matrix g = Matrix::Zero(p, p);
  switch (mode) {
    case Mode::One:
      g.selfadjointView<Eigen::Lower>().rankUpdate(t.unfold1());
      break;
    case Mode::Two:
      for (Index i = 0; i < p; ++i) g.selfadjointView<Eigen::Lower>().rankUpdate(t.slice(i));
      break;
    case Mode::Three:
      g.selfadjointView<Eigen::Lower>().rankUpdate(t.fibres().transpose());
      break;
  }
  return g.selfadjointView<Eigen::Lower>();
}

struct Triple {
  Vector u, v, w;
};

inline Triple svd_init(const Tensor3& t) {
  if (t.frobenius_norm() == 0.0) throw DegenerateInputError("svd_init: zero tensor");
  return {leading_eigenvector(unfolding_gram(t, Mode::One)), leading_eigenvector(unfolding_gram(t, Mode::Two)),
          leading_eigenvector(unfolding_gram(t, Mode::Three))};
}

struct FactorResiduals {
  double r_u = 0.0, r_v = 0.0, r_w = 0.0;
  double max() const { return std::max({r_u, r_v, r_w}); }
};

inline FactorResiduals residuals(const Tensor3& t, const RankOneFactor& f) {
  return {(contract2(t, f.v, f.w, Mode::One) - f.lambda * f.u).norm(),
          (contract2(t, f.u, f.w, Mode::Two) - f.lambda * f.v).norm(),
          (contract2(t, f.u, f.v, Mode::Three) - f.lambda * f.w).norm()};
}

namespace detail {

inline Vector normalized_or_throw(Vector x, const char* what) {
  const double n = x.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateInputError(std::string("power iteration: zero contraction in ") + what);
  return x / n;
}

inline Vector checked_unit(const Vector& x, Index p, const char* what) {
  require_same_dim(p, x.size(), what);
  return normalized_or_throw(x, what);
}

}  // namespace detail

inline RankOneFactor power_iteration(const Tensor3& t, const PowerIterConfig& cfg = {}) {
  cfg.validate();
  const Index p = t.dim();
  if (t.frobenius_norm() == 0.0) throw DegenerateInputError("power iteration: zero tensor");

  RankOneFactor f;
  if (std::holds_alternative<init::Svd>(cfg.init)) {
    Triple s = svd_init(t);
    f.u = std::move(s.u);
    f.v = std::move(s.v);
    f.w = std::move(s.w);
  } else if (const auto* g = std::get_if<init::Given>(&cfg.init)) {
    f.u = detail::checked_unit(g->u, p, "given u");
    f.v = detail::checked_unit(g->v, p, "given v");
    f.w = detail::checked_unit(g->w, p, "given w");
  } else {
    Rng rng(std::get<init::Random>(cfg.init).seed);
    f.u = random_unit_vector(rng, p);
    f.v = random_unit_vector(rng, p);
    f.w = random_unit_vector(rng, p);
  }

  // T(., v, w) and T(u, ., w) both come from the slab T(., ., w), so a sweep
  // streams the tensor twice instead of three times.
  double delta = 0.0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Matrix tw = contract1(t, f.w, Mode::Three);
    Vector u = detail::normalized_or_throw(tw * f.v, "mode 1");
    Vector v = detail::normalized_or_throw(tw.transpose() * u, "mode 2");
    Vector w = detail::normalized_or_throw(contract2(t, u, v, Mode::Three), "mode 3");
    delta = std::max({(u - f.u).norm(), (v - f.v).norm(), (w - f.w).norm()});
    f.u = std::move(u);
    f.v = std::move(v);
    f.w = std::move(w);
    f.iterations = it;
    if (delta < cfg.tol) {
      f.converged = true;
      break;
    }
  }

  f.lambda = contract3(t, f.u, f.v, f.w);
  if (f.lambda < 0.0) {
    f.u = -f.u;
    f.lambda = -f.lambda;
  }
  if (!f.converged) {
    FactorResiduals r = residuals(t, f);
    throw PowerIterationError("power iteration: no convergence after " + std::to_string(cfg.max_iter) +
                                  " sweeps (last change " + std::to_string(delta) + ")",
                              {r.r_u, r.r_v, r.r_w, delta}, f);
  }
  return f;
}

/// The rank-one tensor lambda u (x) v (x) w.
inline Tensor3 to_tensor(const RankOneFactor& f) { return f.lambda * outer3(f.u, f.v, f.w); }

}  // namespace tdefl
