#pragma once

// Limiting spectral laws of the block contraction matrices.
//
// First step: the semicircle law on [-e, e], e = 2 sqrt(2/3), with
//   r(z) = 3/4 (-z + sqrt(z - e) sqrt(z + e)).
// Second step: the law nu_tau with Stieltjes transform q = a + 2b, where
//   (2b + z) a = -1/3,   (a + z - tau b) b = -1/3.

#include "tdefl/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>

namespace tdefl {

inline Complex r_semicircle(Complex z) {
  const double e = kSemicircleEdge;
  if (z.imag() == 0.0 && std::abs(z.real()) < e) {
    throw DomainError("r_semicircle: real z = " + std::to_string(z.real()) + " inside the support");
  }
  return 0.75 * (-z + std::sqrt(z - e) * std::sqrt(z + e));
}

inline double r_semicircle(double x) { return r_semicircle(Complex(x, 0.0)).real(); }

inline double semicircle_density(double x) {
  return 3.0 / (4.0 * std::numbers::pi) * std::sqrt(std::max(8.0 / 3.0 - x * x, 0.0));
}

inline double semicircle_cdf(double x) {
  const double rr = 8.0 / 3.0;
  const double e = kSemicircleEdge;
  if (x <= -e) return 0.0;
  if (x >= e) return 1.0;
  return 0.5 + x * std::sqrt(rr - x * x) / (std::numbers::pi * rr) + std::asin(x / e) / std::numbers::pi;
}

inline double f_r(double z) { return z + r_semicircle(z); }
inline double h_r(double z) { return -1.0 / r_semicircle(z); }

// ---------------------------------------------------------------------------

struct StieltjesState {
  Complex z;
  double tau = -1.0;
  Complex a, b, q;
  int iterations = 0;

  /// Residuals of the two defining equations.
  std::array<double, 2> residuals() const {
    return {std::abs((2.0 * b + z) * a + 1.0 / 3.0), std::abs((a + z - tau * b) * b + 1.0 / 3.0)};
  }
};

struct FixedPointConfig {
  double tol = 1e-13;
  int max_iter = 200000;
  double pivot_tol = 1e-14;
};

namespace detail {

inline Complex semicircle_seed(Complex z) {
  try {
    return r_semicircle(z) / 3.0;
  } catch (const DomainError&) {
    return -1.0 / (3.0 * z);
  }
}

inline double fp_residual(Complex z, double tau, Complex a, Complex b) {
  return std::max(std::abs((2.0 * b + z) * a + 1.0 / 3.0), std::abs((a + z - tau * b) * b + 1.0 / 3.0));
}

}  // namespace detail

inline StieltjesState stieltjes_fixed_point(Complex z, double tau, const FixedPointConfig& cfg = {}) {
  Complex a = detail::semicircle_seed(z);
  Complex b = a;
  bool damped = false;
  int rising = 0;
  double last_res = detail::fp_residual(z, tau, a, b);
  std::vector<double> tail;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const Complex d1 = 3.0 * (2.0 * b + z);
    if (std::abs(d1) < cfg.pivot_tol) throw NumericError("stieltjes_fixed_point: vanishing pivot 2b + z");
    Complex an = -1.0 / d1;
    if (damped) an = 0.5 * a + 0.5 * an;
    const Complex d2 = 3.0 * (an + z - tau * b);
    if (std::abs(d2) < cfg.pivot_tol) throw NumericError("stieltjes_fixed_point: vanishing pivot a + z - tau b");
    Complex bn = -1.0 / d2;
    if (damped) bn = 0.5 * b + 0.5 * bn;
    if (!std::isfinite(an.real()) || !std::isfinite(bn.real()) || !std::isfinite(an.imag()) ||
        !std::isfinite(bn.imag())) {
      throw NumericError("stieltjes_fixed_point: non-finite iterate");
    }
    const double step = std::max(std::abs(an - a), std::abs(bn - b));
    a = an;
    b = bn;
    const double res = detail::fp_residual(z, tau, a, b);
    if (!damped) {
      rising = res > last_res ? rising + 1 : 0;
      if (rising >= 2) damped = true;
    }
    last_res = res;
    if (step < cfg.tol) return {z, tau, a, b, a + 2.0 * b, it};
    if (it > cfg.max_iter - 4) tail.push_back(res);
  }
  throw ConvergenceError("stieltjes_fixed_point: no convergence at z = (" + std::to_string(z.real()) + ", " +
                             std::to_string(z.imag()) + "), tau = " + std::to_string(tau),
                         tail);
}

namespace detail {

/// Roots of c[0] b^3 + c[1] b^2 + c[2] b + c[3], dropping the leading term
/// when it vanishes.
inline std::vector<Complex> cubic_roots(const std::array<Complex, 4>& c) {
  std::vector<Complex> roots;
  if (std::abs(c[0]) < 1e-12) {
    const Complex disc = std::sqrt(c[2] * c[2] - 4.0 * c[1] * c[3]);
    if (std::abs(c[1]) < 1e-300) return {-c[3] / c[2]};
    return {(-c[2] + disc) / (2.0 * c[1]), (-c[2] - disc) / (2.0 * c[1])};
  }
  Eigen::Matrix3cd comp = Eigen::Matrix3cd::Zero();
  comp(0, 0) = -c[1] / c[0];
  comp(0, 1) = -c[2] / c[0];
  comp(0, 2) = -c[3] / c[0];
  comp(1, 0) = 1.0;
  comp(2, 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(comp, false);
  for (int i = 0; i < 3; ++i) roots.push_back(es.eigenvalues()[i]);
  return roots;
}

inline Complex polish_root(const std::array<Complex, 4>& c, Complex b) {
  for (int k = 0; k < 8; ++k) {
    const Complex f = ((c[0] * b + c[1]) * b + c[2]) * b + c[3];
    const Complex df = (3.0 * c[0] * b + 2.0 * c[1]) * b + c[2];
    if (std::abs(df) < 1e-300) break;
    const Complex step = f / df;
    b -= step;
    if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(b))) break;
  }
  return b;
}

inline std::array<Complex, 4> stieltjes_cubic(Complex z, double tau) {
  return {-6.0 * tau, 6.0 * z - 3.0 * tau * z, 1.0 + 3.0 * z * z, z};
}

}  // namespace detail

/// Same transform through the cubic satisfied by b. For Im z > 0 the root with
/// Im a, Im b >= 0 and the largest Im q is kept. For real z outside the
/// support, a and b must carry the sign of -z and the smallest |q| wins.
inline StieltjesState stieltjes_algebraic(Complex z, double tau) {
  const auto coeffs = detail::stieltjes_cubic(z, tau);
  const bool real_axis = z.imag() == 0.0;
  const double sgn = z.real() >= 0.0 ? 1.0 : -1.0;
  std::optional<std::pair<Complex, Complex>> best;
  double best_score = 0.0;
  const double slack = 1e-12;
  for (Complex b : detail::cubic_roots(coeffs)) {
    b = detail::polish_root(coeffs, b);
    const Complex d = 2.0 * b + z;
    if (std::abs(d) < 1e-300) continue;
    if (real_axis) {
      if (std::abs(b.imag()) > 1e-8 * std::max(1.0, std::abs(b))) continue;
      b = Complex(b.real(), 0.0);
    }
    const Complex a = -1.0 / (3.0 * (2.0 * b + z));
    double score;
    if (real_axis) {
      if (sgn * a.real() > slack || sgn * b.real() > slack) continue;
      score = -std::abs(a + 2.0 * b);
    } else {
      if (b.imag() < -slack || a.imag() < -slack) continue;
      score = (a + 2.0 * b).imag();
      // a and b are transforms of mass-1/3 measures, so |s|^2 <= Im s / (3 Im z)
      // by Cauchy-Schwarz; a spurious root of size z/tau breaks this for tau > 0
      const double cap = 1.01 / (3.0 * z.imag());
      if (std::norm(a) > cap * a.imag() + 1e-24 || std::norm(b) > cap * b.imag() + 1e-24) score -= 1e300;
    }
    if (!best || score > best_score) {
      best = std::make_pair(a, b);
      best_score = score;
    }
  }
  if (!best) throw NumericError("stieltjes_algebraic: no admissible root");
  auto [a, b] = *best;
  return {z, tau, a, b, a + 2.0 * b, 0};
}

/// Fixed point first, cubic route when the iteration fails or leaves the
/// defining equations unsatisfied.
inline StieltjesState stieltjes(Complex z, double tau, const FixedPointConfig& cfg = {}) {
  try {
    StieltjesState s = stieltjes_fixed_point(z, tau, cfg);
    auto r = s.residuals();
    if (std::max(r[0], r[1]) < 1e-10 && (z.imag() <= 0.0 || s.q.imag() >= 0.0)) return s;
  } catch (const NumericError&) {
  } catch (const ConvergenceError&) {
  }
  return stieltjes_algebraic(z, tau);
}

// ---------------------------------------------------------------------------

struct DensityTable {
  std::vector<double> grid;
  std::vector<double> values;

  double trapezoid() const {
    double s = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) s += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    return s;
  }

  /// Normalised cumulative trapezoid, linearly interpolated.
  std::vector<double> cumulative() const {
    std::vector<double> c(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i)
      c[i] = c[i - 1] + 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
    if (!c.empty() && c.back() > 0.0)
      for (double& x : c) x /= c.back();
    return c;
  }
};

/// CDF of a tabulated density, usable as a callable.
class TabulatedCdf {
 public:
  explicit TabulatedCdf(const DensityTable& t) : grid_(t.grid), cum_(t.cumulative()) {}

  double operator()(double x) const {
    if (grid_.empty() || x <= grid_.front()) return 0.0;
    if (x >= grid_.back()) return 1.0;
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    const double t = (x - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
    return cum_[i - 1] + t * (cum_[i] - cum_[i - 1]);
  }

 private:
  std::vector<double> grid_;
  std::vector<double> cum_;
};

class DensityError : public NumericError {
 public:
  DensityError(const std::string& what, double x) : NumericError(what), x_(x) {}
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// (1/pi) Im q(x + i eps) on the grid, clipped at zero.
inline DensityTable nu_density(const std::vector<double>& grid, double tau, double eps = 1e-6) {
  if (!(eps > 0.0)) throw ParameterError("nu_density: eps must be > 0");
  DensityTable t;
  t.grid = grid;
  t.values.reserve(grid.size());
  for (double x : grid) {
    try {
      const StieltjesState s = stieltjes_algebraic(Complex(x, eps), tau);
      t.values.push_back(std::max(s.q.imag() / std::numbers::pi, 0.0));
    } catch (const Error& e) {
      throw DensityError(std::string("nu_density: ") + e.what() + " at x = " + std::to_string(x), x);
    }
  }
  return t;
}

inline double nu_density_at(double x, double tau, double eps = 1e-6) {
  return std::max(stieltjes_algebraic(Complex(x, eps), tau).q.imag() / std::numbers::pi, 0.0);
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return g;
}

/// Right end of supp(nu_tau): coarse scan from x = 10 down to 0, then
/// bisection on the density threshold.
inline double support_right_edge(double tau, double threshold = 1e-4, double eps = 1e-6) {
  const double step = 0.01;
  double hi = 10.0;
  for (double x = 10.0; x >= 0.0; x -= step) {
    if (nu_density_at(x, tau, eps) >= threshold) {
      double lo = x;
      hi = std::min(x + step, 10.0);
      for (int k = 0; k < 60 && hi - lo > 1e-12; ++k) {
        const double mid = 0.5 * (lo + hi);
        (nu_density_at(mid, tau, eps) >= threshold ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

inline void write_density_csv(std::ostream& os, const DensityTable& t) {
  os << "x,density\n";
  char buf[64];
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", t.grid[i], t.values[i]);
    os << buf;
  }
}

}  // namespace tdefl
