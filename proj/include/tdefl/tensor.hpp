#pragma once

// Dense cubic order-3 tensors and their contractions.
//
// Storage is row-major with the last index fastest: entry (i, j, k) lives at
// flat offset (i * p + j) * p + k. The CSV dump/load format follows the same
// order.

#include "tdefl/core.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>

namespace tdefl {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Tensor3 {
 public:
  /// Zero tensor of side p.
  explicit Tensor3(Index p) : p_(p) {
    if (p < 1) throw DimensionError("Tensor3: dimension must be >= 1");
    data_.assign(static_cast<std::size_t>(p * p * p), 0.0);
  }

  Tensor3(Index p, std::vector<double> data) : p_(p), data_(std::move(data)) {
    if (p < 1) throw DimensionError("Tensor3: dimension must be >= 1");
    if (static_cast<Index>(data_.size()) != p * p * p) {
      throw DimensionError("Tensor3: flat data has " + std::to_string(data_.size()) +
                           " entries, expected p^3 = " + std::to_string(p * p * p));
    }
    for (double x : data_) {
      if (!std::isfinite(x)) throw NumericError("Tensor3: non-finite entry");
    }
  }

  Index dim() const noexcept { return p_; }
  Index size() const noexcept { return p_ * p_ * p_; }

  Index offset(Index i, Index j, Index k) const noexcept { return (i * p_ + j) * p_ + k; }

  double operator()(Index i, Index j, Index k) const noexcept { return data_[offset(i, j, k)]; }
  double& operator()(Index i, Index j, Index k) noexcept { return data_[offset(i, j, k)]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  /// Pointer to the fibre T(i, j, :).
  const double* fibre(Index i, Index j) const noexcept { return data_.data() + offset(i, j, 0); }
  double* fibre(Index i, Index j) noexcept { return data_.data() + offset(i, j, 0); }

  /// Mode-1 unfolding, p x p^2, column index j * p + k.
  Eigen::Map<const RowMatrix> unfold1() const { return {data_.data(), p_, p_ * p_}; }
  Eigen::Map<RowMatrix> unfold1() { return {data_.data(), p_, p_ * p_}; }

  /// p^2 x p view with row index i * p + j; its transpose is the mode-3 unfolding.
  Eigen::Map<const RowMatrix> fibres() const { return {data_.data(), p_ * p_, p_}; }
  Eigen::Map<RowMatrix> fibres() { return {data_.data(), p_ * p_, p_}; }

  /// Frontal slice T(i, :, :) as a p x p matrix (rows j, columns k).
  Eigen::Map<const RowMatrix> slice(Index i) const { return {data_.data() + i * p_ * p_, p_, p_}; }
  Eigen::Map<RowMatrix> slice(Index i) { return {data_.data() + i * p_ * p_, p_, p_}; }

  double frobenius_norm() const {
    return Eigen::Map<const Vector>(data_.data(), size()).norm();
  }

  Tensor3& operator+=(const Tensor3& o) {
    require_same_dim(p_, o.p_, "Tensor3::operator+=");
    vec() += o.vec();
    return *this;
  }
  Tensor3& operator-=(const Tensor3& o) {
    require_same_dim(p_, o.p_, "Tensor3::operator-=");
    vec() -= o.vec();
    return *this;
  }
  Tensor3& operator*=(double s) {
    vec() *= s;
    return *this;
  }

  friend Tensor3 operator+(Tensor3 a, const Tensor3& b) { return a += b; }
  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) { return a -= b; }
  friend Tensor3 operator*(double s, Tensor3 a) { return a *= s; }
  friend Tensor3 operator*(Tensor3 a, double s) { return a *= s; }

  bool operator==(const Tensor3& o) const = default;

 private:
  Eigen::Map<Vector> vec() { return {data_.data(), size()}; }
  Eigen::Map<const Vector> vec() const { return {data_.data(), size()}; }

  Index p_;
  std::vector<double> data_;
};

/// Modes are numbered 1, 2, 3 as in the usual tensor notation.
enum class Mode : int { One = 1, Two = 2, Three = 3 };

inline Mode mode_from_int(int m) {
  if (m < 1 || m > 3) throw ParameterError("mode must be 1, 2 or 3, got " + std::to_string(m));
  return static_cast<Mode>(m);
}

/// Frobenius inner product.
inline double inner(const Tensor3& a, const Tensor3& b) {
  require_same_dim(a.dim(), b.dim(), "inner");
  return Eigen::Map<const Vector>(a.data().data(), a.size())
      .dot(Eigen::Map<const Vector>(b.data().data(), b.size()));
}

inline Tensor3 outer3(const Vector& x, const Vector& y, const Vector& z) {
  require_same_dim(x.size(), y.size(), "outer3 (y)");
  require_same_dim(x.size(), z.size(), "outer3 (z)");
  const Index p = x.size();
  Tensor3 t(p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      const double xy = x[i] * y[j];
      Eigen::Map<Vector>(t.fibre(i, j), p) = xy * z;
    }
  }
  return t;
}

/// T(v, ., .), T(., v, .) or T(., ., v): the p x p matrix left after
/// contracting one mode. The surviving modes keep their order, so mode 1
/// gives out(j, k), mode 2 gives out(i, k) and mode 3 gives out(i, j).
inline Matrix contract1(const Tensor3& t, const Vector& v, Mode mode) {
  const Index p = t.dim();
  require_same_dim(p, v.size(), "contract1");
  Matrix out(p, p);
  switch (mode) {
    case Mode::One: {
      Eigen::RowVectorXd flat = v.transpose() * t.unfold1();
      out = Eigen::Map<const RowMatrix>(flat.data(), p, p);
      break;
    }
    case Mode::Two:
      for (Index i = 0; i < p; ++i) out.row(i) = v.transpose() * t.slice(i);
      break;
    case Mode::Three: {
      Vector flat = t.fibres() * v;
      out = Eigen::Map<const RowMatrix>(flat.data(), p, p);
      break;
    }
  }
  return out;
}

/// Contraction on two vectors. `a` and `b` go to the two non-free modes in
/// increasing mode order, e.g. free mode 3 gives out[k] = sum_ij a_i b_j T_ijk.
inline Vector contract2(const Tensor3& t, const Vector& a, const Vector& b, Mode free_mode) {
  const Index p = t.dim();
  require_same_dim(p, a.size(), "contract2 (a)");
  require_same_dim(p, b.size(), "contract2 (b)");
  Vector out = Vector::Zero(p);
  switch (free_mode) {
    case Mode::One:
      for (Index i = 0; i < p; ++i) {
        double s = 0.0;
        for (Index j = 0; j < p; ++j) s += a[j] * Eigen::Map<const Vector>(t.fibre(i, j), p).dot(b);
        out[i] = s;
      }
      break;
    case Mode::Two:
      for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) out[j] += a[i] * Eigen::Map<const Vector>(t.fibre(i, j), p).dot(b);
      }
      break;
    case Mode::Three:
      for (Index i = 0; i < p; ++i) {
        for (Index j = 0; j < p; ++j) out.noalias() += (a[i] * b[j]) * Eigen::Map<const Vector>(t.fibre(i, j), p);
      }
      break;
  }
  return out;
}

inline double contract3(const Tensor3& t, const Vector& u, const Vector& v, const Vector& w) {
  require_same_dim(t.dim(), u.size(), "contract3 (u)");
  return u.dot(contract2(t, v, w, Mode::One));
}

/// T x_mode M: out = sum_{i'} M(i, i') T(..., i', ...) along the given mode.
inline Tensor3 mode_product(const Tensor3& t, const Matrix& m, Mode mode) {
  const Index p = t.dim();
  if (m.rows() != p || m.cols() != p) {
    throw DimensionError("mode_product: matrix must be " + std::to_string(p) + "x" + std::to_string(p));
  }
  Tensor3 out(p);
  switch (mode) {
    case Mode::One:
      out.unfold1().noalias() = m * t.unfold1();
      break;
    case Mode::Two:
      for (Index i = 0; i < p; ++i) out.slice(i).noalias() = m * t.slice(i);
      break;
    case Mode::Three:
      out.fibres().noalias() = t.fibres() * m.transpose();
      break;
  }
  return out;
}

inline Tensor3 mode1_matmul(const Tensor3& t, const Matrix& m) { return mode_product(t, m, Mode::One); }

/// T x_mode (I - gamma u u^T) in O(p^3), i.e. T - gamma u (x)_mode T(u).
inline Tensor3 project_mode(const Tensor3& t, const Vector& u, double gamma, Mode mode) {
  const Index p = t.dim();
  require_same_dim(p, u.size(), "project_mode");
  const Matrix c = contract1(t, u, mode);
  Tensor3 out = t;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      Eigen::Map<Vector> f(out.fibre(i, j), p);
      switch (mode) {
        case Mode::One:
          f -= (gamma * u[i]) * c.row(j).transpose();
          break;
        case Mode::Two:
          f -= (gamma * u[j]) * c.row(i).transpose();
          break;
        case Mode::Three:
          f -= (gamma * c(i, j)) * u;
          break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV dump: first line "p", second line the value of p, then one entry per
// line in storage order. Debug scale only.

inline void write_csv(std::ostream& os, const Tensor3& t) {
  os << "p\n" << t.dim() << '\n';
  char buf[40];
  for (double x : t.data()) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    os << buf;
  }
}

inline Tensor3 read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "p") throw ParameterError("tensor csv: missing 'p' header");
  if (!std::getline(is, line)) throw ParameterError("tensor csv: missing dimension");
  const long p = std::stol(line);
  if (p < 1) throw DimensionError("tensor csv: dimension must be >= 1");
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(p * p * p));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    data.push_back(std::stod(line));
  }
  return Tensor3(p, std::move(data));
}

}  // namespace tdefl
