#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carlab/errors.hpp"
#include "carlab/fock_space.hpp"
#include "carlab/types.hpp"

namespace carlab {

template <typename Scalar = cd>
struct FockVector {
  FockSpace space;
  VectorX<Scalar> amplitudes;

  RealOf<Scalar> norm() const { return amplitudes.norm(); }
  Scalar dot(const FockVector& other) const { return amplitudes.dot(other.amplitudes); }
};

template <typename Scalar = cd>
FockVector<Scalar> basis_state(const FockSpace& space, Mask mask) {
  VectorX<Scalar> v = VectorX<Scalar>::Zero(static_cast<Eigen::Index>(space.dim()));
  v(static_cast<Eigen::Index>(space.index(mask))) = Scalar(1);
  return {space, std::move(v)};
}

template <typename Scalar = cd>
FockVector<Scalar> vacuum(const FockSpace& space) {
  return basis_state<Scalar>(space, Mask{0});
}

/**
 * Dense operator on the Fock space, in the canonical (particle number, mask)
 * basis order. `grading_shift = d` declares that sector n is mapped into
 * sector n + d; check_grading() tests the claim.
 */
template <typename Scalar = cd>
struct FockOperator {
  FockSpace space;
  MatrixX<Scalar> matrix;
  std::optional<int> grading_shift;

  FockOperator adjoint() const {
    return {space, matrix.adjoint(),
            grading_shift ? std::optional<int>(-*grading_shift) : std::nullopt};
  }

  FockVector<Scalar> operator()(const FockVector<Scalar>& v) const { return {space, matrix * v.amplitudes}; }
};

namespace detail {

inline std::optional<int> sum_shift(std::optional<int> a, std::optional<int> b) {
  if (a && b) return *a + *b;
  return std::nullopt;
}

inline std::optional<int> same_shift(std::optional<int> a, std::optional<int> b) {
  if (a && b && *a == *b) return a;
  return std::nullopt;
}

inline void require_same_space(const FockSpace& a, const FockSpace& b) {
  if (!(a == b)) throw ValidationError("operators act on different Fock spaces");
}

inline void require_dense(const FockSpace& space) {
  if (!space.dense_allowed()) {
    throw ResourceError("dense Fock matrices are limited to m <= " +
                        std::to_string(FockSpace::kMaxDenseModes) + "; use the sector-blocked form");
  }
}

}  // namespace detail

template <typename Scalar>
FockOperator<Scalar> operator*(const FockOperator<Scalar>& x, const FockOperator<Scalar>& y) {
  detail::require_same_space(x.space, y.space);
  return {x.space, x.matrix * y.matrix, detail::sum_shift(x.grading_shift, y.grading_shift)};
}

template <typename Scalar>
FockOperator<Scalar> operator+(const FockOperator<Scalar>& x, const FockOperator<Scalar>& y) {
  detail::require_same_space(x.space, y.space);
  return {x.space, x.matrix + y.matrix, detail::same_shift(x.grading_shift, y.grading_shift)};
}

template <typename Scalar>
FockOperator<Scalar> operator-(const FockOperator<Scalar>& x, const FockOperator<Scalar>& y) {
  detail::require_same_space(x.space, y.space);
  return {x.space, x.matrix - y.matrix, detail::same_shift(x.grading_shift, y.grading_shift)};
}

template <typename Scalar>
FockOperator<Scalar> operator*(Scalar c, const FockOperator<Scalar>& x) {
  return {x.space, c * x.matrix, x.grading_shift};
}

template <typename Scalar>
FockOperator<Scalar> adjoint(const FockOperator<Scalar>& x) {
  return x.adjoint();
}

/// {X, Y} = XY + YX
template <typename Scalar>
FockOperator<Scalar> anticommutator(const FockOperator<Scalar>& x, const FockOperator<Scalar>& y) {
  return x * y + y * x;
}

/// [X, Y] = XY - YX
template <typename Scalar>
FockOperator<Scalar> commutator(const FockOperator<Scalar>& x, const FockOperator<Scalar>& y) {
  return x * y - y * x;
}

template <typename Scalar = cd>
FockOperator<Scalar> identity(const FockSpace& space) {
  detail::require_dense(space);
  const auto d = static_cast<Eigen::Index>(space.dim());
  return {space, MatrixX<Scalar>::Identity(d, d), 0};
}

/// Diagonal operator with eigenvalue f(n) on the n-particle sector.
template <typename Scalar = cd, typename Fn>
FockOperator<Scalar> sector_function(const FockSpace& space, Fn&& f) {
  detail::require_dense(space);
  const auto d = static_cast<Eigen::Index>(space.dim());
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(d, d);
  for (int n = 0; n <= space.modes(); ++n) {
    const Scalar value = Scalar(f(n));
    for (std::size_t i = space.sector_begin(n); i < space.sector_begin(n) + space.sector_size(n); ++i) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = value;
    }
  }
  return {space, std::move(m), 0};
}

/**
 * Graded operator stored as one block per source sector: block(n) maps the
 * n-particle sector into sector n + shift (size C(m,n+shift) x C(m,n)).
 * Used beyond the dense limit, e.g. number-preserving operators at m = 12
 * store blocks of at most C(12,6) = 924 rows.
 */
template <typename Scalar = cd>
struct SectorOperator {
  FockSpace space;
  int shift = 0;
  std::vector<MatrixX<Scalar>> blocks;  // indexed by source particle number

  static SectorOperator zero(const FockSpace& space, int shift) {
    SectorOperator op{space, shift, {}};
    op.blocks.resize(static_cast<std::size_t>(space.modes()) + 1);
    for (int n = 0; n <= space.modes(); ++n) {
      op.blocks[static_cast<std::size_t>(n)] = MatrixX<Scalar>::Zero(
          static_cast<Eigen::Index>(space.sector_size(n + shift)), static_cast<Eigen::Index>(space.sector_size(n)));
    }
    return op;
  }

  const MatrixX<Scalar>& block(int n) const { return blocks[static_cast<std::size_t>(n)]; }

  SectorOperator adjoint() const {
    SectorOperator out = zero(space, -shift);
    for (int n = 0; n <= space.modes(); ++n) {
      const int target = n + shift;
      if (target < 0 || target > space.modes()) continue;
      out.blocks[static_cast<std::size_t>(target)] = block(n).adjoint();
    }
    return out;
  }

  /// X^* X; always number preserving.
  SectorOperator gram() const {
    SectorOperator out = zero(space, 0);
    for (int n = 0; n <= space.modes(); ++n) {
      if (block(n).size() == 0) continue;
      out.blocks[static_cast<std::size_t>(n)] = block(n).adjoint() * block(n);
    }
    return out;
  }

  FockVector<Scalar> operator()(const FockVector<Scalar>& v) const {
    VectorX<Scalar> out = VectorX<Scalar>::Zero(v.amplitudes.size());
    for (int n = 0; n <= space.modes(); ++n) {
      const int target = n + shift;
      if (target < 0 || target > space.modes() || block(n).size() == 0) continue;
      out.segment(static_cast<Eigen::Index>(space.sector_begin(target)), block(n).rows()) +=
          block(n) * v.amplitudes.segment(static_cast<Eigen::Index>(space.sector_begin(n)), block(n).cols());
    }
    return {space, std::move(out)};
  }

  FockOperator<Scalar> to_dense() const {
    detail::require_dense(space);
    const auto d = static_cast<Eigen::Index>(space.dim());
    MatrixX<Scalar> m = MatrixX<Scalar>::Zero(d, d);
    for (int n = 0; n <= space.modes(); ++n) {
      const int target = n + shift;
      if (target < 0 || target > space.modes() || block(n).size() == 0) continue;
      m.block(static_cast<Eigen::Index>(space.sector_begin(target)), static_cast<Eigen::Index>(space.sector_begin(n)),
              block(n).rows(), block(n).cols()) = block(n);
    }
    return {space, std::move(m), shift};
  }
};

/**
 * Materialize a term generator. A generator exposes `shift()` and
 * `operator()(Mask source, emit)`, where emit(Mask target, Scalar coefficient)
 * adds coefficient * |target> to the image of |source>.
 */
template <typename Scalar = cd, typename Terms>
FockOperator<Scalar> assemble_dense(const FockSpace& space, const Terms& terms) {
  detail::require_dense(space);
  const auto d = static_cast<Eigen::Index>(space.dim());
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(d, d);
  for (std::size_t col = 0; col < space.dim(); ++col) {
    terms(space.mask(col), [&](Mask target, Scalar c) {
      m(static_cast<Eigen::Index>(space.index(target)), static_cast<Eigen::Index>(col)) += c;
    });
  }
  return {space, std::move(m), terms.shift()};
}

template <typename Scalar = cd, typename Terms>
SectorOperator<Scalar> assemble_blocked(const FockSpace& space, const Terms& terms) {
  auto op = SectorOperator<Scalar>::zero(space, terms.shift());
  for (int n = 0; n <= space.modes(); ++n) {
    const int target_n = n + terms.shift();
    if (target_n < 0 || target_n > space.modes()) continue;
    auto& blk = op.blocks[static_cast<std::size_t>(n)];
    const std::size_t row0 = space.sector_begin(target_n);
    const std::size_t col0 = space.sector_begin(n);
    for (std::size_t col = 0; col < space.sector_size(n); ++col) {
      terms(space.mask(col0 + col), [&](Mask target, Scalar c) {
        blk(static_cast<Eigen::Index>(space.index(target) - row0), static_cast<Eigen::Index>(col)) += c;
      });
    }
  }
  return op;
}

/// Matrix-free application; works at every admissible m.
template <typename Scalar, typename Terms>
FockVector<Scalar> apply_terms(const Terms& terms, const FockVector<Scalar>& v) {
  const FockSpace& space = v.space;
  VectorX<Scalar> out = VectorX<Scalar>::Zero(v.amplitudes.size());
  for (std::size_t col = 0; col < space.dim(); ++col) {
    const Scalar x = v.amplitudes(static_cast<Eigen::Index>(col));
    if (x == Scalar(0)) continue;
    terms(space.mask(col), [&](Mask target, Scalar c) { out(static_cast<Eigen::Index>(space.index(target))) += c * x; });
  }
  return {space, std::move(out)};
}

}  // namespace carlab
