#pragma once

// Shared vocabulary for the tdefl headers: linear-algebra aliases, the
// exception hierarchy and the seeded random streams.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tdefl {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

/// Right edge of the semicircle support, 2*sqrt(2/3).
inline const double kSemicircleEdge = 2.0 * std::sqrt(2.0 / 3.0);

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched lengths or shapes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Model or configuration parameter outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Input that makes the operation meaningless (zero tensor, zero contraction).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point outside the domain of a transform, or an iterate that
/// entered the bulk of a limiting spectrum.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Floating-point breakdown: near-zero pivot, non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Evaluation point coincides with an eigenvalue.
class PoleError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Iteration cap reached. Carries the last residuals reported by the solver.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> residuals = {})
      : Error(what), residuals_(std::move(residuals)) {}
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<double> residuals_;
};

// ---------------------------------------------------------------------------
// Helpers

inline void require_same_dim(Index expected, Index got, const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(got));
  }
}

inline double sqr(double x) { return x * x; }

/// Per-trial stream: a 64-bit Mersenne twister whose seed is scrambled by one
/// SplitMix64 step, so that consecutive integer seeds give unrelated streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double normal() { return normal_(engine_); }

  Vector normal_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  std::mt19937_64& engine() { return engine_; }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Seed of the trial with the given index in a multi-trial experiment.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) { return base + trial; }

inline Vector random_unit_vector(Rng& rng, Index n) {
  Vector v = rng.normal_vector(n);
  return v / v.norm();
}

}  // namespace tdefl
