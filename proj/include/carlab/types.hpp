#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace carlab {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

using cd = std::complex<double>;
using MatrixXcd = MatrixX<cd>;
using VectorXcd = VectorX<cd>;

/// One-particle vector f in L = C^m; conjugation is componentwise.
template <typename Scalar>
using OneBodyVector = VectorX<Scalar>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace tol {
/// Algebraic identities (anticommutators, adjoints, reconstructions).
inline constexpr double kAlgebraic = 1e-12;
/// Entry-level symmetry tests on one-body matrices.
inline constexpr double kSymmetry = 1e-13;
/// Eigenvalue-based PSD slack.
inline constexpr double kSpectral = 1e-8;
/// Spectral norm identities computed through an eigensolve.
inline constexpr double kNorm = 1e-10;
/// Commutator identity and bilinear Fock constructions.
inline constexpr double kCommutator = 1e-10;
}  // namespace tol

template <typename Derived>
RealOf<typename Derived::Scalar> max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? RealOf<typename Derived::Scalar>(0) : m.cwiseAbs().maxCoeff();
}

/// Largest singular value, via the top eigenvalue of X^* X.
template <typename Scalar = cd>
RealOf<Scalar> spectral_norm(const MatrixX<Scalar>& x) {
  if (x.size() == 0) return 0;
  const MatrixX<Scalar> gram = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(RealOf<Scalar>(0), es.eigenvalues().maxCoeff()));
}

}  // namespace carlab
