#pragma once

// Block contraction matrices and their spectra.
//
// For a tensor X and unit vectors (u, v, w) the 3p x 3p matrix is
//
//   scale * [[ 0,       X(w),    X(v) ],
//            [ X(w)^T,  0,       X(u) ],
//            [ X(v)^T,  X(u)^T,  0    ]]
//
// with X(w) the mode-3 contraction (i, j), X(v) the mode-2 contraction (i, k)
// and X(u) the mode-1 contraction (j, k).

#include "tdefl/eigen_sym.hpp"
#include "tdefl/spiked.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <string>

namespace tdefl {

struct SymBlockMatrix {
  Index p = 0;
  Matrix entries;

  Index n() const { return 3 * p; }
  double trace() const { return entries.trace(); }
};

inline SymBlockMatrix block_contraction(const Matrix& xu, const Matrix& xv, const Matrix& xw, double scale) {
  const Index p = xu.rows();
  SymBlockMatrix s;
  s.p = p;
  s.entries = Matrix::Zero(3 * p, 3 * p);
  s.entries.block(0, p, p, p) = scale * xw;
  s.entries.block(0, 2 * p, p, p) = scale * xv;
  s.entries.block(p, 2 * p, p, p) = scale * xu;
  s.entries.block(p, 0, p, p) = scale * xw.transpose();
  s.entries.block(2 * p, 0, p, p) = scale * xv.transpose();
  s.entries.block(2 * p, p, p, p) = scale * xu.transpose();
  return s;
}

/// N for the tensor `x` at (u, v, w). Pass the noise W, or sqrt(n) * T to see
/// the same bulk with a finite-rank signal perturbation.
inline SymBlockMatrix build_N(const Tensor3& x, const Vector& u, const Vector& v, const Vector& w) {
  const Index p = x.dim();
  require_same_dim(p, u.size(), "build_N (u)");
  require_same_dim(p, v.size(), "build_N (v)");
  require_same_dim(p, w.size(), "build_N (w)");
  return block_contraction(contract1(x, u, Mode::One), contract1(x, v, Mode::Two), contract1(x, w, Mode::Three),
                           1.0 / std::sqrt(noise_size(p)));
}

/// Second-step matrix: the mode-1 block pair uses u2 - gamma <u1,u2> u1.
inline SymBlockMatrix build_M(const Tensor3& x, const Vector& u1, const Vector& u2, const Vector& v2,
                              const Vector& w2, double gamma) {
  const Index p = x.dim();
  require_same_dim(p, u1.size(), "build_M (u1)");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ParameterError("build_M: gamma must lie in [0, 1]");
  const double kappa = u1.dot(u2);
  Vector u3 = u2 - gamma * kappa * u1;
  return build_N(x, u3, v2, w2);
}

// ---------------------------------------------------------------------------

struct SpectrumResult {
  Vector eigenvalues;  // ascending
  std::string source;
  std::map<std::string, double> params;

  Index size() const { return eigenvalues.size(); }
};

inline SpectrumResult sym_eigenvalues(const SymBlockMatrix& s, std::string source = "N",
                                      std::map<std::string, double> params = {}) {
  JacobiConfig cfg;
  cfg.vectors = false;
  SymEigenResult e = jacobi_eigen(s.entries, cfg);
  return {std::move(e.values), std::move(source), std::move(params)};
}

inline SpectrumResult spectrum_of(const Matrix& m, std::string source = "matrix") {
  JacobiConfig cfg;
  cfg.vectors = false;
  return {jacobi_eigen(m, cfg).values, std::move(source), {}};
}

/// (1/n) sum_i 1 / (lambda_i - z).
inline Complex empirical_stieltjes(const SpectrumResult& spec, Complex z) {
  if (spec.size() == 0) throw DegenerateInputError("empirical_stieltjes: empty spectrum");
  Complex s = 0.0;
  for (Index i = 0; i < spec.size(); ++i) {
    const Complex d = spec.eigenvalues[i] - z;
    if (std::abs(d) <= 1e-14 * std::max(1.0, std::abs(z))) {
      throw PoleError("empirical_stieltjes: z coincides with eigenvalue " + std::to_string(spec.eigenvalues[i]));
    }
    s += 1.0 / d;
  }
  return s / static_cast<double>(spec.size());
}

/// (1/n) tr (S - z I)^{-1} for real z, by LU, without the eigendecomposition.
inline double resolvent_trace(const Matrix& s, double z) {
  const Index n = s.rows();
  Eigen::PartialPivLU<Matrix> lu(s - z * Matrix::Identity(n, n));
  Matrix inv = lu.inverse();
  if (!inv.allFinite()) throw PoleError("resolvent_trace: singular resolvent");
  return inv.trace() / static_cast<double>(n);
}

struct Histogram {
  double lo = 0.0;
  double width = 1.0;
  std::vector<double> centers;
  std::vector<double> density;

  double integral() const {
    double s = 0.0;
    for (double d : density) s += d * width;
    return s;
  }
};

inline Histogram histogram(const SpectrumResult& spec, int bins) {
  if (bins < 1) throw ParameterError("histogram: bins must be >= 1");
  const Index n = spec.size();
  if (n == 0) throw DegenerateInputError("histogram: empty spectrum");
  const double lo = spec.eigenvalues.minCoeff();
  const double hi = spec.eigenvalues.maxCoeff();
  Histogram h;
  if (!(hi > lo)) {
    h.lo = lo - 0.5;
    h.width = 1.0;
    h.centers = {lo};
    h.density = {1.0};
    return h;
  }
  h.lo = lo;
  h.width = (hi - lo) / bins;
  std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
  for (Index i = 0; i < n; ++i) {
    auto b = static_cast<int>((spec.eigenvalues[i] - lo) / h.width);
    counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1.0;
  }
  for (int b = 0; b < bins; ++b) {
    h.centers.push_back(lo + (b + 0.5) * h.width);
    h.density.push_back(counts[static_cast<std::size_t>(b)] / (static_cast<double>(n) * h.width));
  }
  return h;
}

/// Largest gap between a histogram and a reference distribution, comparing
/// each bin with the reference mass of that bin divided by its width.
inline double histogram_sup_deviation(const Histogram& h, const std::function<double(double)>& cdf) {
  double worst = 0.0;
  for (std::size_t b = 0; b < h.density.size(); ++b) {
    const double a = h.lo + static_cast<double>(b) * h.width;
    const double ref = (cdf(a + h.width) - cdf(a)) / h.width;
    worst = std::max(worst, std::abs(h.density[b] - ref));
  }
  return worst;
}

/// Kolmogorov-Smirnov distance between the empirical law of the spectrum and
/// a continuous CDF.
inline double ks_distance(const SpectrumResult& spec, const std::function<double(double)>& cdf) {
  const Index n = spec.size();
  if (n == 0) throw DegenerateInputError("ks_distance: empty spectrum");
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double f = cdf(spec.eigenvalues[i]);
    const double below = static_cast<double>(i) / static_cast<double>(n);
    const double above = static_cast<double>(i + 1) / static_cast<double>(n);
    worst = std::max({worst, std::abs(f - below), std::abs(above - f)});
  }
  return worst;
}

inline void write_spectrum_csv(std::ostream& os, const SpectrumResult& spec) {
  os << "index,eigenvalue\n";
  char buf[64];
  for (Index i = 0; i < spec.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%ld,%.12g\n", static_cast<long>(i), spec.eigenvalues[i]);
    os << buf;
  }
}

inline void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "bin_center,density\n";
  char buf[64];
  for (std::size_t b = 0; b < h.centers.size(); ++b) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", h.centers[b], h.density[b]);
    os << buf;
  }
}

}  // namespace tdefl
