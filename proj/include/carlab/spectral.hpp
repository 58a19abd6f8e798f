#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "carlab/fock_operator.hpp"
#include "carlab/one_body.hpp"

namespace carlab {

/// B = sum_j mu_j (e_j, .) f_j with mu nonincreasing; e_j are the columns of right_basis, f_j of left_basis.
template <typename Scalar = cd>
struct SingularDecomposition {
  VectorX<RealOf<Scalar>> mu;
  MatrixX<Scalar> right_basis;
  MatrixX<Scalar> left_basis;

  MatrixX<Scalar> reconstruct() const { return left_basis * mu.template cast<Scalar>().asDiagonal() * right_basis.adjoint(); }
};

template <typename Scalar = cd>
SingularDecomposition<Scalar> svd(const MatrixX<Scalar>& b) {
  Eigen::JacobiSVD<MatrixX<Scalar>> solver(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {solver.singularValues(), solver.matrixV(), solver.matrixU()};
}

template <typename Scalar = cd>
SingularDecomposition<Scalar> svd(const OneBodyOperator<Scalar>& b) {
  return svd<Scalar>(b.matrix());
}

/// (sum_j mu_j^r)^{1/r}; r = infinity gives max_j mu_j. Rejects r < 1.
template <typename Real>
Real schatten_norm_of(std::span<const Real> mu, double r) {
  if (!(r >= 1)) throw ValidationError("Schatten exponent must satisfy r >= 1, got " + std::to_string(r));
  if (mu.empty()) return Real(0);
  if (std::isinf(r)) return *std::max_element(mu.begin(), mu.end());
  const Real top = *std::max_element(mu.begin(), mu.end());
  if (top == Real(0)) return Real(0);
  Real sum(0);
  for (Real x : mu) sum += std::pow(x / top, Real(r));
  return top * std::pow(sum, Real(1 / r));
}

template <typename Derived>
auto schatten_norm(const Eigen::MatrixBase<Derived>& b, double r) {
  using Scalar = typename Derived::Scalar;
  const auto dec = svd<Scalar>(MatrixX<Scalar>(b));
  return schatten_norm_of<RealOf<Scalar>>(std::span<const RealOf<Scalar>>(dec.mu.data(), static_cast<std::size_t>(dec.mu.size())), r);
}

template <typename Scalar>
RealOf<Scalar> schatten_norm(const OneBodyOperator<Scalar>& b, double r) {
  return schatten_norm(b.matrix(), r);
}

/// Outcome of X <= Y in the Loewner order: pass iff lambda_min(Y - X) >= -tolerance.
struct BoundVerdict {
  std::string lhs_id;
  std::string rhs_id;
  double slack_min = 0;
  double tolerance = 0;
  bool pass = false;
};

namespace detail {
template <typename Scalar>
void require_self_adjoint(const MatrixX<Scalar>& x, const char* what) {
  if (x.rows() != x.cols()) throw ValidationError(std::string(what) + " must be square");
  const auto bound = RealOf<Scalar>(tol::kAlgebraic) * (1 + max_abs(x));
  if (max_abs(MatrixX<Scalar>(x - x.adjoint())) > bound) {
    throw ValidationError(std::string(what) + " is not self-adjoint");
  }
}

template <typename Scalar>
RealOf<Scalar> min_eigenvalue(const MatrixX<Scalar>& hermitian) {
  if (hermitian.size() == 0) return RealOf<Scalar>(kInf);
  const MatrixX<Scalar> sym = (hermitian + hermitian.adjoint()) / RealOf<Scalar>(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}
}  // namespace detail

/// Default tolerance 1e-8 * (1 + |Y - X|) when `tolerance` is negative.
template <typename Scalar = cd>
BoundVerdict loewner_leq(const MatrixX<Scalar>& x, const MatrixX<Scalar>& y, double tolerance = -1,
                         std::string lhs_id = "X", std::string rhs_id = "Y") {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ValidationError("loewner_leq: shape mismatch");
  detail::require_self_adjoint(x, "loewner_leq lhs");
  detail::require_self_adjoint(y, "loewner_leq rhs");
  const MatrixX<Scalar> diff = y - x;
  if (tolerance < 0) tolerance = tol::kSpectral * (1 + static_cast<double>(spectral_norm<Scalar>(diff)));
  BoundVerdict v{std::move(lhs_id), std::move(rhs_id), static_cast<double>(detail::min_eigenvalue<Scalar>(diff)),
                 tolerance, false};
  v.pass = v.slack_min >= -tolerance;
  return v;
}

template <typename Scalar>
BoundVerdict loewner_leq(const FockOperator<Scalar>& x, const FockOperator<Scalar>& y, double tolerance = -1,
                         std::string lhs_id = "X", std::string rhs_id = "Y") {
  detail::require_same_space(x.space, y.space);
  return loewner_leq<Scalar>(x.matrix, y.matrix, tolerance, std::move(lhs_id), std::move(rhs_id));
}

/// Blockwise comparison of two number-preserving operators.
template <typename Scalar>
BoundVerdict loewner_leq(const SectorOperator<Scalar>& x, const SectorOperator<Scalar>& y, double tolerance = -1,
                         std::string lhs_id = "X", std::string rhs_id = "Y") {
  detail::require_same_space(x.space, y.space);
  if (x.shift != 0 || y.shift != 0) throw ValidationError("blocked Loewner check needs number-preserving operators");
  double slack = kInf;
  double norm = 0;
  for (int n = 0; n <= x.space.modes(); ++n) {
    detail::require_self_adjoint<Scalar>(x.block(n), "loewner_leq lhs block");
    detail::require_self_adjoint<Scalar>(y.block(n), "loewner_leq rhs block");
    const MatrixX<Scalar> diff = y.block(n) - x.block(n);
    slack = std::min(slack, static_cast<double>(detail::min_eigenvalue<Scalar>(diff)));
    norm = std::max(norm, static_cast<double>(spectral_norm<Scalar>(diff)));
  }
  if (tolerance < 0) tolerance = tol::kSpectral * (1 + norm);
  return {std::move(lhs_id), std::move(rhs_id), slack, tolerance, slack >= -tolerance};
}

/**
 * c^p for a PSD matrix by spectral calculus. Eigenvalues down to
 * -1e-12 * max(1, |c|) are clamped to zero; anything more negative throws.
 */
template <typename Scalar = cd>
MatrixX<Scalar> psd_power(const MatrixX<Scalar>& c, double p) {
  using Real = RealOf<Scalar>;
  detail::require_self_adjoint(c, "psd_power argument");
  const MatrixX<Scalar> sym = (c + c.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(sym);
  VectorX<Real> lam = es.eigenvalues();
  const Real floor = -Real(tol::kAlgebraic) * std::max(Real(1), lam.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam(i) < floor) throw ValidationError("psd_power: argument has eigenvalue " + std::to_string(double(lam(i))));
    lam(i) = lam(i) <= 0 ? Real(0) : std::pow(lam(i), Real(p));
  }
  return es.eigenvectors() * lam.template cast<Scalar>().asDiagonal() * es.eigenvectors().adjoint();
}

/// (sum_j w_j c_j^p)^{1/p} <= w^{1/p - 1/q} (sum_j w_j c_j^q)^{1/q}, w = sum_j w_j, 1 <= p <= q < infinity.
template <typename Scalar = cd>
BoundVerdict jensen_check(std::span<const double> weights, std::span<const MatrixX<Scalar>> ops, double p, double q,
                          double tolerance = -1) {
  using Real = RealOf<Scalar>;
  if (weights.size() != ops.size() || ops.empty()) throw ValidationError("jensen_check: need one weight per operator");
  if (!(p >= 1 && p <= q && std::isfinite(q))) throw ValidationError("jensen_check: need 1 <= p <= q < infinity");
  const auto dim = ops.front().rows();
  MatrixX<Scalar> sum_p = MatrixX<Scalar>::Zero(dim, dim);
  MatrixX<Scalar> sum_q = MatrixX<Scalar>::Zero(dim, dim);
  double w = 0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    if (weights[j] < 0) throw ValidationError("jensen_check: negative weight");
    if (ops[j].rows() != dim || ops[j].cols() != dim) throw ValidationError("jensen_check: shape mismatch");
    sum_p += Real(weights[j]) * psd_power<Scalar>(ops[j], p);
    sum_q += Real(weights[j]) * psd_power<Scalar>(ops[j], q);
    w += weights[j];
  }
  const MatrixX<Scalar> lhs = psd_power<Scalar>(sum_p, 1 / p);
  const MatrixX<Scalar> rhs = Real(std::pow(w, 1 / p - 1 / q)) * psd_power<Scalar>(sum_q, 1 / q);
  return loewner_leq<Scalar>(lhs, rhs, tolerance, "(sum w c^p)^(1/p)", "w^(1/p-1/q) (sum w c^q)^(1/q)");
}

/// sum_j mu_j c_j <= (sum_j mu_j^p)^{1/p} (sum_j c_j^q)^{1/q} for finite conjugate p, q.
template <typename Scalar = cd>
BoundVerdict hoelder_check(std::span<const double> mu, std::span<const MatrixX<Scalar>> ops, double p, double q,
                           double tolerance = -1) {
  using Real = RealOf<Scalar>;
  if (mu.size() != ops.size() || ops.empty()) throw ValidationError("hoelder_check: need one coefficient per operator");
  if (!(p >= 1 && q >= 1 && std::isfinite(p) && std::isfinite(q)) || std::abs(1 / p + 1 / q - 1) > 1e-12) {
    throw ValidationError("hoelder_check: exponents must be finite and conjugate");
  }
  const auto dim = ops.front().rows();
  MatrixX<Scalar> lhs = MatrixX<Scalar>::Zero(dim, dim);
  MatrixX<Scalar> sum_q = MatrixX<Scalar>::Zero(dim, dim);
  double mu_p = 0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    if (mu[j] < 0) throw ValidationError("hoelder_check: negative coefficient");
    if (ops[j].rows() != dim || ops[j].cols() != dim) throw ValidationError("hoelder_check: shape mismatch");
    lhs += Real(mu[j]) * ops[j];
    sum_q += psd_power<Scalar>(ops[j], q);
    mu_p += std::pow(mu[j], p);
  }
  const MatrixX<Scalar> rhs = Real(std::pow(mu_p, 1 / p)) * psd_power<Scalar>(sum_q, 1 / q);
  return loewner_leq<Scalar>(lhs, rhs, tolerance, "sum mu c", "|mu|_p (sum c^q)^(1/q)");
}

struct CauchySchwarzVerdict {
  BoundVerdict verdict;
  /// max entry of (RHS - LHS) - 1/2 sum_{jk} D_jk^* D_jk, D_jk = sigma b_k a_j - b_j a_k; scaled by 1 + max|RHS|
  double identity_residual = 0;
  bool pass() const { return verdict.pass && identity_residual <= tol::kAlgebraic; }
};

/// sigma sum_{jk} a_j^* b_k^* b_j a_k <= sum_{jk} a_j^* b_k^* b_k a_j
template <typename Scalar = cd>
CauchySchwarzVerdict cauchy_schwarz_check(std::span<const MatrixX<Scalar>> a, std::span<const MatrixX<Scalar>> b,
                                          int sigma, double tolerance = -1) {
  using Real = RealOf<Scalar>;
  if (a.size() != b.size() || a.empty()) throw ValidationError("cauchy_schwarz_check: lists must have equal nonzero length");
  if (sigma != 1 && sigma != -1) throw ValidationError("cauchy_schwarz_check: sigma must be +1 or -1");
  const auto dim = a.front().rows();
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (a[j].rows() != dim || a[j].cols() != dim || b[j].rows() != dim || b[j].cols() != dim) {
      throw ValidationError("cauchy_schwarz_check: shape mismatch");
    }
  }
  const Real s(sigma);
  MatrixX<Scalar> lhs = MatrixX<Scalar>::Zero(dim, dim);
  MatrixX<Scalar> rhs = MatrixX<Scalar>::Zero(dim, dim);
  MatrixX<Scalar> closed = MatrixX<Scalar>::Zero(dim, dim);
  for (std::size_t j = 0; j < a.size(); ++j) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      lhs += s * (a[j].adjoint() * b[k].adjoint() * b[j] * a[k]);
      rhs += a[j].adjoint() * b[k].adjoint() * b[k] * a[j];
      const MatrixX<Scalar> d = s * (b[k] * a[j]) - b[j] * a[k];
      closed += d.adjoint() * d;
    }
  }
  // hermitize against rounding; both sums are self-adjoint in exact arithmetic
  lhs = (lhs + lhs.adjoint().eval()) / Real(2);
  rhs = (rhs + rhs.adjoint().eval()) / Real(2);
  CauchySchwarzVerdict out;
  out.verdict = loewner_leq<Scalar>(lhs, rhs, tolerance, "sigma sum a*b*ba", "sum a*b*ba (diagonal pairing)");
  out.identity_residual =
      static_cast<double>(max_abs(MatrixX<Scalar>((rhs - lhs) - closed / Real(2))) / (1 + max_abs(rhs)));
  return out;
}

}  // namespace carlab
