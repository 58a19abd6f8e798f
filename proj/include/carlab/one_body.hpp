#pragma once

#include <string>
#include <utility>

#include "carlab/errors.hpp"
#include "carlab/types.hpp"

namespace carlab {

/**
 * Operator on L = C^m. Symmetry flags are computed once from the entries:
 * self-adjoint means B = B^*, skew means A^T = -A with A^T the entrywise
 * transpose (the conjugate of the adjoint). Both use 1e-13 * (1 + max|entry|).
 */
template <typename Scalar = cd>
class OneBodyOperator {
 public:
  using Matrix = MatrixX<Scalar>;

  OneBodyOperator() = default;
  explicit OneBodyOperator(Matrix matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols()) {
      throw ValidationError("one-body operator must be square, got " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()));
    }
    const auto scale = 1 + max_abs(matrix_);
    const auto bound = RealOf<Scalar>(tol::kSymmetry) * scale;
    self_adjoint_ = max_abs(matrix_ - Matrix(matrix_.adjoint())) <= bound;
    skew_ = max_abs(matrix_ + Matrix(matrix_.transpose())) <= bound;
  }

  static OneBodyOperator identity(int m) { return OneBodyOperator(Matrix::Identity(m, m)); }

  template <typename Derived>
  static OneBodyOperator diagonal(const Eigen::MatrixBase<Derived>& d) {
    return OneBodyOperator(Matrix(d.template cast<Scalar>().asDiagonal()));
  }

  int size() const noexcept { return static_cast<int>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  Scalar operator()(int row, int col) const { return matrix_(row, col); }

  bool is_self_adjoint() const noexcept { return self_adjoint_; }
  bool is_skew() const noexcept { return skew_; }
  bool is_diagonal() const { return matrix_.isDiagonal(0); }

  OneBodyOperator adjoint() const { return OneBodyOperator(matrix_.adjoint()); }
  OneBodyOperator transpose() const { return OneBodyOperator(matrix_.transpose()); }

 private:
  Matrix matrix_;
  bool self_adjoint_ = true;
  bool skew_ = true;
};

template <typename Scalar>
OneBodyOperator<Scalar> operator*(const OneBodyOperator<Scalar>& x, const OneBodyOperator<Scalar>& y) {
  return OneBodyOperator<Scalar>(x.matrix() * y.matrix());
}

/// (A - A^T) / 2, for callers that intend to discard the symmetric part.
template <typename Scalar>
OneBodyOperator<Scalar> skew_part(const OneBodyOperator<Scalar>& a) {
  return OneBodyOperator<Scalar>((a.matrix() - a.matrix().transpose()) / RealOf<Scalar>(2));
}

}  // namespace carlab
