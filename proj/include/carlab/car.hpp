#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "carlab/errors.hpp"
#include "carlab/fock_operator.hpp"
#include "carlab/random.hpp"

namespace carlab {

/// Result of one elementary ladder step: sign * |mask>.
struct SignedMask {
  int sign;
  Mask mask;
};

/// Jordan-Wigner sign: (-1)^{number of occupied modes below `mode`}.
inline int jw_sign(Mask state, int mode) noexcept {
  const Mask below = (Mask{1} << mode) - 1u;
  return (popcount(state & below) & 1) ? -1 : 1;
}

inline std::optional<SignedMask> annihilate(Mask state, int mode) noexcept {
  const Mask bit = Mask{1} << mode;
  if (!(state & bit)) return std::nullopt;
  return SignedMask{jw_sign(state, mode), state & ~bit};
}

inline std::optional<SignedMask> create(Mask state, int mode) noexcept {
  const Mask bit = Mask{1} << mode;
  if (state & bit) return std::nullopt;
  return SignedMask{jw_sign(state, mode), state | bit};
}

namespace detail {
inline void require_mode(const FockSpace& space, int mode) {
  if (mode < 0 || mode >= space.modes()) {
    throw ValidationError("mode index " + std::to_string(mode) + " outside 0.." + std::to_string(space.modes() - 1));
  }
}

template <typename Derived>
void require_length(const FockSpace& space, const Eigen::MatrixBase<Derived>& f) {
  if (f.size() != space.modes()) {
    throw ValidationError("one-body vector has " + std::to_string(f.size()) + " components, expected " +
                          std::to_string(space.modes()));
  }
}
}  // namespace detail

/// Terms of sum_j f_j a_j (annihilate = true) or sum_j f_j a^dagger_j.
template <typename Scalar = cd>
struct LinearTerms {
  VectorX<Scalar> coefficients;
  bool annihilate = true;

  int shift() const { return annihilate ? -1 : 1; }

  template <typename Emit>
  void operator()(Mask source, Emit&& emit) const {
    for (int j = 0; j < coefficients.size(); ++j) {
      const Scalar c = coefficients(j);
      if (c == Scalar(0)) continue;
      const auto step = annihilate ? carlab::annihilate(source, j) : carlab::create(source, j);
      if (step) emit(step->mask, RealOf<Scalar>(step->sign) * c);
    }
  }
};

/// a^dagger_j: |S> -> (-1)^{#{k in S : k < j}} |S + {j}>, or 0 if j in S.
template <typename Scalar = cd>
FockOperator<Scalar> creation(const FockSpace& space, int mode) {
  detail::require_mode(space, mode);
  VectorX<Scalar> e = VectorX<Scalar>::Zero(space.modes());
  e(mode) = Scalar(1);
  return assemble_dense<Scalar>(space, LinearTerms<Scalar>{std::move(e), false});
}

template <typename Scalar = cd>
FockOperator<Scalar> annihilation(const FockSpace& space, int mode) {
  detail::require_mode(space, mode);
  VectorX<Scalar> e = VectorX<Scalar>::Zero(space.modes());
  e(mode) = Scalar(1);
  return assemble_dense<Scalar>(space, LinearTerms<Scalar>{std::move(e), true});
}

/// a(f) = sum_j f_j a_j, linear in f.
template <typename Scalar = cd>
FockOperator<Scalar> op_a(const FockSpace& space, const OneBodyVector<Scalar>& f) {
  detail::require_length(space, f);
  return assemble_dense<Scalar>(space, LinearTerms<Scalar>{f, true});
}

/// a^dagger(f) = sum_j f_j a^dagger_j; a(f)^* = a^dagger(conj f).
template <typename Scalar = cd>
FockOperator<Scalar> op_adag(const FockSpace& space, const OneBodyVector<Scalar>& f) {
  detail::require_length(space, f);
  return assemble_dense<Scalar>(space, LinearTerms<Scalar>{f, false});
}

/// a^dagger(f_n) ... a^dagger(f_1) Omega for a list f_1, ..., f_n (applied first to last).
template <typename Scalar = cd>
FockVector<Scalar> slater_state(const FockSpace& space, std::span<const OneBodyVector<Scalar>> orbitals) {
  FockVector<Scalar> v = vacuum<Scalar>(space);
  for (const auto& f : orbitals) {
    detail::require_length(space, f);
    v = apply_terms(LinearTerms<Scalar>{f, false}, v);
  }
  return v;
}

/**
 * a^dagger_{j_n} ... a^dagger_{j_1} Omega for modes j_1, ..., j_n (0-based,
 * applied first to last). With the sign convention of creation() and
 * ascending modes this is (-1)^{n(n-1)/2} |S>.
 */
template <typename Scalar = cd>
FockVector<Scalar> slater_state(const FockSpace& space, std::span<const int> modes) {
  Mask seen = 0;
  int sign = 1;
  for (int j : modes) {
    detail::require_mode(space, j);
    const auto step = create(seen, j);
    if (!step) throw ValidationError("duplicate mode " + std::to_string(j) + " in Slater state");
    sign *= step->sign;
    seen = step->mask;
  }
  FockVector<Scalar> v = basis_state<Scalar>(space, seen);
  v.amplitudes *= RealOf<Scalar>(sign);
  return v;
}

template <typename Scalar = cd>
FockVector<Scalar> slater_state(const FockSpace& space, std::initializer_list<int> modes) {
  const std::vector<int> list(modes);
  return slater_state<Scalar>(space, std::span<const int>(list));
}

/// N = dGamma(Id): eigenvalue |S| on |S>.
template <typename Scalar = cd>
FockOperator<Scalar> number_operator(const FockSpace& space) {
  return sector_function<Scalar>(space, [](int n) { return RealOf<Scalar>(n); });
}

/// Largest residuals of the CAR identities over the trials, each already divided by (1 + |f||g|).
struct CarReport {
  int modes = 0;
  int trials = 0;
  double anticommutator_aa = 0;        // {a(f), a(g)}
  double anticommutator_adag_adag = 0; // {a^dagger(f), a^dagger(g)}
  double anticommutator_mixed = 0;     // {a(f), a^dagger(g)} - (conj f, g) Id
  double unitarity = 0;                // a(f)^* - a^dagger(conj f)
  double projection = 0;               // P^2 - |f|^2 P, P = a^dagger(f) a(conj f)
  double projection_adjoint = 0;       // P^* - P
  double norm_identity = 0;            // max(| |a(f)| - |f| |, | |a^dagger(f)| - |f| |), unscaled
  double algebraic_tolerance = tol::kAlgebraic;
  double norm_tolerance = tol::kNorm;

  bool pass() const {
    return anticommutator_aa <= algebraic_tolerance && anticommutator_adag_adag <= algebraic_tolerance &&
           anticommutator_mixed <= algebraic_tolerance && unitarity <= algebraic_tolerance &&
           projection <= algebraic_tolerance && projection_adjoint <= algebraic_tolerance &&
           norm_identity <= norm_tolerance;
  }
};

template <typename Scalar = cd>
CarReport verify_car(const FockSpace& space, const OneBodyVector<Scalar>& f, const OneBodyVector<Scalar>& g,
                     CarReport report = {}) {
  using Real = RealOf<Scalar>;
  const auto a_f = op_a(space, f);
  const auto a_g = op_a(space, g);
  const auto adag_f = op_adag(space, f);
  const auto adag_g = op_adag(space, g);
  const auto id = identity<Scalar>(space);
  const Real scale = 1 + f.norm() * g.norm();
  const Scalar pairing = (f.array() * g.array()).sum();  // (conj f, g) with antilinear first slot

  auto track = [&](double& slot, const MatrixX<Scalar>& residual) {
    slot = std::max(slot, static_cast<double>(max_abs(residual) / scale));
  };
  track(report.anticommutator_aa, anticommutator(a_f, a_g).matrix);
  track(report.anticommutator_adag_adag, anticommutator(adag_f, adag_g).matrix);
  track(report.anticommutator_mixed, anticommutator(a_f, adag_g).matrix - pairing * id.matrix);
  track(report.unitarity, a_f.matrix.adjoint() - op_adag(space, OneBodyVector<Scalar>(f.conjugate())).matrix);

  const MatrixX<Scalar> p = adag_f.matrix * op_a(space, OneBodyVector<Scalar>(f.conjugate())).matrix;
  track(report.projection, p * p - f.squaredNorm() * p);
  track(report.projection_adjoint, p.adjoint() - p);

  const Real fn = f.norm();
  report.norm_identity = std::max({report.norm_identity, static_cast<double>(std::abs(spectral_norm(a_f.matrix) - fn)),
                                   static_cast<double>(std::abs(spectral_norm(adag_f.matrix) - fn))});
  report.modes = space.modes();
  report.trials += 1;
  return report;
}

/// CAR self-check on `trials` seeded complex Gaussian pairs (f, g).
template <typename Scalar = cd>
CarReport verify_car(const FockSpace& space, int trials, std::uint64_t seed) {
  CarReport report;
  report.modes = space.modes();
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    const auto f = random_vector<Scalar>(space.modes(), rng);
    const auto g = random_vector<Scalar>(space.modes(), rng);
    report = verify_car<Scalar>(space, f, g, report);
  }
  return report;
}

}  // namespace carlab
