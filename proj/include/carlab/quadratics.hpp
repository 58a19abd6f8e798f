#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "carlab/car.hpp"
#include "carlab/one_body.hpp"

namespace carlab {

namespace detail {
template <typename Scalar>
void require_size(const FockSpace& space, const OneBodyOperator<Scalar>& op) {
  if (op.size() != space.modes()) {
    throw ValidationError("one-body operator is " + std::to_string(op.size()) + "x" + std::to_string(op.size()) +
                          ", Fock space has " + std::to_string(space.modes()) + " modes");
  }
}

template <typename Scalar>
void require_skew(const OneBodyOperator<Scalar>& op, const char* what) {
  if (!op.is_skew()) throw ValidationError(std::string(what) + " requires a skew argument (A^T = -A)");
}
}  // namespace detail

/// sum_{j,k} B_{kj} a^dagger_k a_j
template <typename Scalar = cd>
struct HoppingTerms {
  const MatrixX<Scalar>& coefficients;

  int shift() const { return 0; }

  template <typename Emit>
  void operator()(Mask source, Emit&& emit) const {
    const int m = static_cast<int>(coefficients.rows());
    for (int j = 0; j < m; ++j) {
      const auto first = annihilate(source, j);
      if (!first) continue;
      for (int k = 0; k < m; ++k) {
        const Scalar c = coefficients(k, j);
        if (c == Scalar(0)) continue;
        const auto second = create(first->mask, k);
        if (second) emit(second->mask, RealOf<Scalar>(first->sign * second->sign) * c);
      }
    }
  }
};

/// sum_{j,k} A_{kj} a_k a_j
template <typename Scalar = cd>
struct PairAnnihilationTerms {
  const MatrixX<Scalar>& coefficients;

  int shift() const { return -2; }

  template <typename Emit>
  void operator()(Mask source, Emit&& emit) const {
    const int m = static_cast<int>(coefficients.rows());
    for (int j = 0; j < m; ++j) {
      const auto first = annihilate(source, j);
      if (!first) continue;
      for (int k = 0; k < m; ++k) {
        const Scalar c = coefficients(k, j);
        if (c == Scalar(0)) continue;
        const auto second = annihilate(first->mask, k);
        if (second) emit(second->mask, RealOf<Scalar>(first->sign * second->sign) * c);
      }
    }
  }
};

/// sum_{j,k} C_{kj} a^dagger_k a^dagger_j
template <typename Scalar = cd>
struct PairCreationTerms {
  const MatrixX<Scalar>& coefficients;

  int shift() const { return 2; }

  template <typename Emit>
  void operator()(Mask source, Emit&& emit) const {
    const int m = static_cast<int>(coefficients.rows());
    for (int j = 0; j < m; ++j) {
      const auto first = create(source, j);
      if (!first) continue;
      for (int k = 0; k < m; ++k) {
        const Scalar c = coefficients(k, j);
        if (c == Scalar(0)) continue;
        const auto second = create(first->mask, k);
        if (second) emit(second->mask, RealOf<Scalar>(first->sign * second->sign) * c);
      }
    }
  }
};

/// Second quantization dGamma(B) = sum_j a^dagger(B e_j) a(conj e_j).
template <typename Scalar = cd>
FockOperator<Scalar> d_gamma(const FockSpace& space, const OneBodyOperator<Scalar>& b) {
  detail::require_size(space, b);
  return assemble_dense<Scalar>(space, HoppingTerms<Scalar>{b.matrix()});
}

/// Quadratic annihilator Delta(A) = sum_j a(A e_j) a(conj e_j); A must be skew.
template <typename Scalar = cd>
FockOperator<Scalar> delta(const FockSpace& space, const OneBodyOperator<Scalar>& a) {
  detail::require_size(space, a);
  detail::require_skew(a, "delta");
  return assemble_dense<Scalar>(space, PairAnnihilationTerms<Scalar>{a.matrix()});
}

/// Quadratic creator Delta^+(C) = sum_j a^dagger(C e_j) a^dagger(conj e_j); C must be skew.
template <typename Scalar = cd>
FockOperator<Scalar> delta_plus(const FockSpace& space, const OneBodyOperator<Scalar>& c) {
  detail::require_size(space, c);
  detail::require_skew(c, "delta_plus");
  return assemble_dense<Scalar>(space, PairCreationTerms<Scalar>{c.matrix()});
}

template <typename Scalar = cd>
SectorOperator<Scalar> d_gamma_blocked(const FockSpace& space, const OneBodyOperator<Scalar>& b) {
  detail::require_size(space, b);
  return assemble_blocked<Scalar>(space, HoppingTerms<Scalar>{b.matrix()});
}

template <typename Scalar = cd>
SectorOperator<Scalar> delta_blocked(const FockSpace& space, const OneBodyOperator<Scalar>& a) {
  detail::require_size(space, a);
  detail::require_skew(a, "delta");
  return assemble_blocked<Scalar>(space, PairAnnihilationTerms<Scalar>{a.matrix()});
}

template <typename Scalar = cd>
SectorOperator<Scalar> delta_plus_blocked(const FockSpace& space, const OneBodyOperator<Scalar>& c) {
  detail::require_size(space, c);
  detail::require_skew(c, "delta_plus");
  return assemble_blocked<Scalar>(space, PairCreationTerms<Scalar>{c.matrix()});
}

template <typename Scalar>
FockVector<Scalar> apply_d_gamma(const OneBodyOperator<Scalar>& b, const FockVector<Scalar>& v) {
  detail::require_size(v.space, b);
  return apply_terms(HoppingTerms<Scalar>{b.matrix()}, v);
}

template <typename Scalar>
FockVector<Scalar> apply_delta_plus(const OneBodyOperator<Scalar>& c, const FockVector<Scalar>& v) {
  detail::require_size(v.space, c);
  detail::require_skew(c, "delta_plus");
  return apply_terms(PairCreationTerms<Scalar>{c.matrix()}, v);
}

struct CommutatorReport {
  double residual = 0;  // max entry of [Delta(A), Delta^+(C)] + 4 dGamma(CA) - 2 tr(AC) Id
  double scale = 1;     // 1 + |A|_F |C|_F
  double tolerance = tol::kCommutator;
  bool pass() const { return residual <= tolerance * scale; }
};

/// [Delta(A), Delta^+(C)] = -4 dGamma(CA) + 2 tr(AC) Id
template <typename Scalar = cd>
CommutatorReport check_commutator(const FockSpace& space, const OneBodyOperator<Scalar>& a,
                                  const OneBodyOperator<Scalar>& c) {
  const auto lhs = commutator(delta(space, a), delta_plus(space, c));
  const auto ca = OneBodyOperator<Scalar>(c.matrix() * a.matrix());
  const Scalar trace = (a.matrix() * c.matrix()).trace();
  const MatrixX<Scalar> residual =
      lhs.matrix + RealOf<Scalar>(4) * d_gamma(space, ca).matrix - RealOf<Scalar>(2) * trace * identity<Scalar>(space).matrix;
  CommutatorReport report;
  report.residual = static_cast<double>(max_abs(residual));
  report.scale = static_cast<double>(1 + a.matrix().norm() * c.matrix().norm());
  return report;
}

/// True iff every entry outside the blocks allowed by the declared shift vanishes to 1e-13 * (1 + max|entry|).
template <typename Scalar>
bool check_grading(const FockOperator<Scalar>& op) {
  if (!op.grading_shift) throw ValidationError("check_grading needs an operator with a declared grading shift");
  const int shift = *op.grading_shift;
  const FockSpace& space = op.space;
  const auto bound = RealOf<Scalar>(tol::kSymmetry) * (1 + max_abs(op.matrix));
  for (Eigen::Index col = 0; col < op.matrix.cols(); ++col) {
    const int n = space.particle_number(static_cast<std::size_t>(col));
    for (Eigen::Index row = 0; row < op.matrix.rows(); ++row) {
      if (space.particle_number(static_cast<std::size_t>(row)) == n + shift) continue;
      if (std::abs(op.matrix(row, col)) > bound) return false;
    }
  }
  return true;
}

template <typename Scalar = cd>
struct SlaterExpectation {
  Scalar fock;      // <Phi_S, dGamma(B) Phi_S>
  Scalar diagonal;  // sum_{j in S} B_jj
  bool pass = false;
};

/// Expectation of dGamma(B) in the Slater state of `modes`, computed in Fock space and as a diagonal sum.
template <typename Scalar = cd>
SlaterExpectation<Scalar> slater_expectation(const FockSpace& space, const OneBodyOperator<Scalar>& b,
                                             std::span<const int> modes) {
  const auto phi = slater_state<Scalar>(space, modes);
  const Scalar fock = phi.dot(apply_d_gamma(b, phi));
  Scalar diagonal(0);
  for (int j : modes) diagonal += b(j, j);
  const auto bound = RealOf<Scalar>(tol::kAlgebraic) * (1 + max_abs(b.matrix()) * RealOf<Scalar>(modes.size()));
  return {fock, diagonal, std::abs(fock - diagonal) <= bound};
}

}  // namespace carlab
