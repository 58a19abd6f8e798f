#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/QR>

#include "carlab/types.hpp"

namespace carlab {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/**
 * Seeded random source (std::mt19937_64).
 *
 * Trials never share an engine: `for_trial(seed, k)` derives an independent
 * stream per trial index so results do not depend on evaluation order.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
    return Rng(seed ^ splitmix64(trial + 0x632be59bd9b4e019ULL));
  }

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

  /// Standard complex Gaussian: E|z|^2 = 1.
  std::complex<double> complex_normal() {
    constexpr double kHalf = 0.70710678118654752440;
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {kHalf * re, kHalf * im};
  }

  template <typename Scalar>
  Scalar draw() {
    if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
      const auto z = complex_normal();
      return Scalar(static_cast<RealOf<Scalar>>(z.real()), static_cast<RealOf<Scalar>>(z.imag()));
    } else {
      return static_cast<Scalar>(normal());
    }
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

template <typename Scalar = cd>
VectorX<Scalar> random_vector(int m, Rng& rng) {
  VectorX<Scalar> v(m);
  for (int i = 0; i < m; ++i) v(i) = rng.draw<Scalar>();
  return v;
}

/// i.i.d. Gaussian entries.
template <typename Scalar = cd>
MatrixX<Scalar> ginibre(int rows, int cols, Rng& rng) {
  MatrixX<Scalar> g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.draw<Scalar>();
  return g;
}

template <typename Scalar = cd>
MatrixX<Scalar> ginibre(int m, Rng& rng) {
  return ginibre<Scalar>(m, m, rng);
}

/// A^T = -A (entrywise transpose).
template <typename Scalar = cd>
MatrixX<Scalar> random_skew(int m, Rng& rng) {
  const MatrixX<Scalar> g = ginibre<Scalar>(m, rng);
  return (g - g.transpose()) / RealOf<Scalar>(2);
}

template <typename Scalar = cd>
MatrixX<Scalar> random_psd(int m, Rng& rng) {
  const MatrixX<Scalar> g = ginibre<Scalar>(m, rng);
  return g * g.adjoint() / RealOf<Scalar>(m);
}

template <typename Scalar = cd>
MatrixX<Scalar> random_unitary(int m, Rng& rng) {
  const MatrixX<Scalar> g = ginibre<Scalar>(m, rng);
  Eigen::HouseholderQR<MatrixX<Scalar>> qr(g);
  MatrixX<Scalar> q = qr.householderQ() * MatrixX<Scalar>::Identity(m, m);
  const MatrixX<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    const auto d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace carlab
