#pragma once

// Cyclic Jacobi eigensolver for dense real symmetric matrices.

#include "tdefl/core.hpp"

#include <algorithm>
#include <numeric>

namespace tdefl {

struct SymEigenResult {
  Vector values;   // ascending
  Matrix vectors;  // column i belongs to values[i]; empty when not requested
  int sweeps = 0;
};

struct JacobiConfig {
  double rel_tol = 1e-12;  // stop when off(S) < rel_tol * |S|_F
  int max_sweeps = 100;
  bool vectors = true;
};

namespace detail {

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  const Index n = a.rows();
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < j; ++i) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

}  // namespace detail

inline SymEigenResult jacobi_eigen(const Matrix& s, const JacobiConfig& cfg = {}) {
  if (s.rows() != s.cols()) throw DimensionError("jacobi_eigen: matrix must be square");
  const Index n = s.rows();
  for (Index i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s.data()[i])) throw NumericError("jacobi_eigen: non-finite entry");
  }
  Matrix a = 0.5 * (s + s.transpose());
  Matrix v;
  if (cfg.vectors) v = Matrix::Identity(n, n);
  SymEigenResult out;

  const double fro = a.norm();
  const double target = cfg.rel_tol * fro;
  // Rotations on entries this small cannot move the off-diagonal norm above target.
  const double skip = n > 1 ? 0.5 * target / static_cast<double>(n) : 0.0;

  if (fro > 0.0 && n > 1) {
    int sweep = 0;
    while (detail::off_diagonal_norm(a) >= target) {
      if (sweep == cfg.max_sweeps) {
        throw NumericError("jacobi_eigen: no convergence after " + std::to_string(sweep) + " sweeps");
      }
      ++sweep;
      for (Index p = 0; p < n - 1; ++p) {
        for (Index q = p + 1; q < n; ++q) {
          const double apq = a(p, q);
          if (std::abs(apq) <= skip) continue;
          const double app = a(p, p);
          const double aqq = a(q, q);
          const double theta = (aqq - app) / (2.0 * apq);
          double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double sn = t * c;

          // columns p and q are contiguous; rows follow by symmetry
          double* cp = a.col(p).data();
          double* cq = a.col(q).data();
          for (Index k = 0; k < n; ++k) {
            const double x = cp[k];
            const double y = cq[k];
            cp[k] = c * x - sn * y;
            cq[k] = sn * x + c * y;
          }
          a(p, p) = app - t * apq;
          a(q, q) = aqq + t * apq;
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          for (Index k = 0; k < n; ++k) {
            if (k == p || k == q) continue;
            a(p, k) = cp[k];
            a(q, k) = cq[k];
          }
          if (cfg.vectors) {
            double* vp = v.col(p).data();
            double* vq = v.col(q).data();
            for (Index k = 0; k < n; ++k) {
              const double x = vp[k];
              const double y = vq[k];
              vp[k] = c * x - sn * y;
              vq[k] = sn * x + c * y;
            }
          }
        }
      }
    }
    out.sweeps = sweep;
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  if (cfg.vectors) out.vectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    if (cfg.vectors) out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

/// Eigenvector of the largest eigenvalue, sign fixed so that its largest
/// magnitude entry is positive.
inline Vector leading_eigenvector(const Matrix& s) {
  SymEigenResult e = jacobi_eigen(s);
  Vector v = e.vectors.col(e.values.size() - 1);
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0.0) v = -v;
  return v / v.norm();
}

}  // namespace tdefl
