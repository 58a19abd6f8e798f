#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "carlab/quadratics.hpp"
#include "carlab/random.hpp"
#include "carlab/spectral.hpp"

namespace carlab {

enum class BoundKind {
  dGamma,
  Delta,
  DeltaPlus,
  basic,
  literature_dGamma,
  literature_Delta,
  literature_DeltaPlus,
  improved_r2,
};

std::string_view to_string(BoundKind kind);
/// Accepts the enumerator names; throws ValidationError otherwise.
BoundKind parse_bound_kind(std::string_view name);

/// Which quadratic a bound is about.
enum class Quadratic { d_gamma, delta, delta_plus };
Quadratic quadratic_of(BoundKind kind);

/**
 * A number-operator estimate and its Schatten exponent r in [1, infinity].
 * s = 2(r - 1)/r (s = 2 at r = infinity). For `basic` the exponent is p and
 * the N power is 1/q = s/2.
 */
struct BoundSpec {
  BoundKind which = BoundKind::dGamma;
  double r = kInf;

  double s() const { return std::isinf(r) ? 2.0 : 2.0 * (r - 1.0) / r; }
};

/// Validates r against the admissible range of `which`.
BoundSpec make_bound_spec(BoundKind which, double r);

/// Parses "inf", "infinity", decimals and fractions such as "4/3".
double parse_exponent(std::string_view text);

/// Schatten norms of the one-body argument a bound needs.
struct NormValues {
  std::optional<double> r_norm;   // |.|_r at BoundSpec::r (|.|_inf or |.|_2 for the literature forms)
  std::optional<double> hs_norm;  // |.|_2
};

/// gamma * (n + offset)^exponent + delta on the n-particle sector; exponent 0 means gamma * Id.
struct RhsForm {
  double gamma = 0;
  double delta = 0;
  double exponent = 0;
  double offset = 0;

  double operator()(int n) const {
    const double power = exponent == 0 ? 1.0 : std::pow(double(n) + offset, exponent);
    return gamma * power + delta;
  }
};

/// Exponent at which the norm in NormValues::r_norm is taken.
double norm_exponent(const BoundSpec& spec);
bool needs_hs_norm(const BoundSpec& spec);
NormValues norm_values(const BoundSpec& spec, std::span<const double> singular_values);
RhsForm rhs_form(const BoundSpec& spec, const NormValues& norms);

template <typename Scalar = cd>
FockOperator<Scalar> rhs_operator(const FockSpace& space, const BoundSpec& spec, const NormValues& norms) {
  const RhsForm form = rhs_form(spec, norms);
  return sector_function<Scalar>(space, [&](int n) { return RealOf<Scalar>(form(n)); });
}

enum class BoundPath { automatic, dense, blocked, diagonal };

struct BoundOptions {
  BoundPath path = BoundPath::automatic;
  /// Negative: 1e-8 * (1 + |RHS|).
  double tolerance = -1;
};

namespace detail {

template <typename Scalar>
std::vector<double> singular_values_of(const OneBodyOperator<Scalar>& b) {
  const auto dec = svd(b);
  std::vector<double> mu(static_cast<std::size_t>(dec.mu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) mu[i] = static_cast<double>(dec.mu(static_cast<Eigen::Index>(i)));
  return mu;
}

template <typename Scalar>
void require_argument(const FockSpace& space, const BoundSpec& spec, const OneBodyOperator<Scalar>& arg) {
  require_size(space, arg);
  if (spec.which == BoundKind::basic) {
    if (!arg.is_diagonal()) throw ValidationError("basic estimate takes a diagonal argument");
    for (int j = 0; j < arg.size(); ++j) {
      const auto d = arg(j, j);
      if (std::abs(std::imag(d)) != 0 || std::real(d) < 0) {
        throw ValidationError("basic estimate takes nonnegative weights");
      }
    }
  } else if (quadratic_of(spec.which) != Quadratic::d_gamma) {
    require_skew(arg, to_string(spec.which).data());
  }
}

inline double rhs_norm(const RhsForm& form, int modes) {
  double top = 0;
  for (int n = 0; n <= modes; ++n) top = std::max(top, std::abs(form(n)));
  return top;
}

template <typename Scalar>
SectorOperator<Scalar> build_blocked(const FockSpace& space, Quadratic q, const OneBodyOperator<Scalar>& arg) {
  switch (q) {
    case Quadratic::d_gamma: return d_gamma_blocked(space, arg);
    case Quadratic::delta: return delta_blocked(space, arg);
    case Quadratic::delta_plus: return delta_plus_blocked(space, arg);
  }
  throw ValidationError("unknown quadratic");
}

template <typename Scalar>
FockOperator<Scalar> build_dense(const FockSpace& space, Quadratic q, const OneBodyOperator<Scalar>& arg) {
  switch (q) {
    case Quadratic::d_gamma: return d_gamma(space, arg);
    case Quadratic::delta: return delta(space, arg);
    case Quadratic::delta_plus: return delta_plus(space, arg);
  }
  throw ValidationError("unknown quadratic");
}

/// Eigenvalue of Q^*Q (or of Q itself for `basic`) on |S> when the argument is diagonal.
template <typename Scalar>
std::vector<double> diagonal_lhs_max(const BoundSpec& spec, const OneBodyOperator<Scalar>& arg) {
  const int m = arg.size();
  std::vector<double> top(static_cast<std::size_t>(m) + 1, 0.0);
  if (quadratic_of(spec.which) != Quadratic::d_gamma) return top;  // diagonal skew => zero operator
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    Scalar sum(0);
    int n = 0;
    for (int j = 0; j < m; ++j) {
      if ((mask >> j) & 1u) {
        sum += arg(j, j);
        ++n;
      }
    }
    const double value = spec.which == BoundKind::basic ? static_cast<double>(std::real(sum))
                                                        : static_cast<double>(std::norm(sum));
    top[static_cast<std::size_t>(n)] = std::max(top[static_cast<std::size_t>(n)], value);
  }
  return top;
}

template <typename Scalar>
std::vector<double> blocked_lhs_max(const FockSpace& space, const BoundSpec& spec, const OneBodyOperator<Scalar>& arg) {
  const auto q = build_blocked(space, quadratic_of(spec.which), arg);
  const auto lhs = spec.which == BoundKind::basic ? q : q.gram();
  std::vector<double> top(static_cast<std::size_t>(space.modes()) + 1, 0.0);
  for (int n = 0; n <= space.modes(); ++n) {
    const auto& blk = lhs.block(n);
    if (blk.size() == 0) continue;
    const MatrixX<Scalar> sym = (blk + blk.adjoint()) / RealOf<Scalar>(2);
    Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es(sym, Eigen::EigenvaluesOnly);
    top[static_cast<std::size_t>(n)] = static_cast<double>(es.eigenvalues().maxCoeff());
  }
  return top;
}

}  // namespace detail

/**
 * Checks Q^*Q <= RHS for Q = dGamma(B), Delta(A) or Delta^+(C) (and
 * sum_j lambda_j a^dagger_j a_j <= Lambda_p N^{1/q} for `basic`).
 *
 * Diagonal arguments are decided exactly by subset sums. Otherwise the dense
 * path builds both sides and asks loewner_leq; the blocked path compares
 * sector by sector (the RHS is a multiple of Id on each sector).
 */
template <typename Scalar = cd>
BoundVerdict verify_bound(const FockSpace& space, const BoundSpec& spec, const OneBodyOperator<Scalar>& arg,
                          BoundOptions options = {}) {
  const BoundSpec checked = make_bound_spec(spec.which, spec.r);
  detail::require_argument(space, checked, arg);
  const auto mu = detail::singular_values_of(arg);
  const NormValues norms = norm_values(checked, mu);
  const RhsForm form = rhs_form(checked, norms);
  const double tolerance = options.tolerance >= 0 ? options.tolerance
                                                  : tol::kSpectral * (1 + detail::rhs_norm(form, space.modes()));
  const std::string lhs_id = std::string(to_string(checked.which)) + ":lhs";
  const std::string rhs_id = std::string(to_string(checked.which)) + ":rhs(r=" + std::to_string(checked.r) + ")";

  BoundPath path = options.path;
  if (path == BoundPath::automatic) {
    path = arg.is_diagonal() ? BoundPath::diagonal : (space.dense_allowed() ? BoundPath::dense : BoundPath::blocked);
  }
  if (path == BoundPath::diagonal && !arg.is_diagonal()) throw ValidationError("diagonal path needs a diagonal argument");

  if (path == BoundPath::dense) {
    const auto q = detail::build_dense(space, quadratic_of(checked.which), arg);
    const auto lhs = checked.which == BoundKind::basic ? q : q.adjoint() * q;
    const MatrixX<Scalar> lhs_sym = (lhs.matrix + lhs.matrix.adjoint()) / RealOf<Scalar>(2);
    return loewner_leq<Scalar>(lhs_sym, rhs_operator<Scalar>(space, checked, norms).matrix, tolerance, lhs_id, rhs_id);
  }
  const auto top = path == BoundPath::diagonal ? detail::diagonal_lhs_max(checked, arg)
                                               : detail::blocked_lhs_max(space, checked, arg);
  double slack = kInf;
  for (int n = 0; n <= space.modes(); ++n) slack = std::min(slack, form(n) - top[static_cast<std::size_t>(n)]);
  return {lhs_id, rhs_id, slack, tolerance, slack >= -tolerance};
}

/**
 * sum_j lambda_j a^dagger(e_j) a(conj e_j) <= Lambda_p N^{1/q}, decided
 * exactly: on the n-particle sector the largest LHS eigenvalue is the sum of
 * the n largest lambda_j, so only those subsets are compared.
 */
BoundVerdict basic_estimate_check(std::span<const double> lambda, double p, double tolerance = -1);

struct BoundSweepRow {
  int modes = 0;
  double r = 0;
  int trial = 0;
  double slack_min = 0;
  /// max over sectors n with RHS(n) > 0 of lambda_max(LHS restricted to n) / RHS(n)
  double max_ratio = 0;
};

template <typename Scalar = cd>
using ArgumentMaker = std::function<OneBodyOperator<Scalar>(int modes, Rng& rng)>;

/// Ginibre matrices for dGamma bounds, skew Gaussians for Delta/DeltaPlus, |Gaussian| weights for `basic`.
template <typename Scalar = cd>
OneBodyOperator<Scalar> random_argument(const BoundSpec& spec, int modes, Rng& rng) {
  if (spec.which == BoundKind::basic) {
    VectorX<Scalar> d(modes);
    for (int j = 0; j < modes; ++j) d(j) = Scalar(std::abs(rng.normal()));
    return OneBodyOperator<Scalar>::diagonal(d);
  }
  if (quadratic_of(spec.which) == Quadratic::d_gamma) return OneBodyOperator<Scalar>(ginibre<Scalar>(modes, rng));
  return OneBodyOperator<Scalar>(random_skew<Scalar>(modes, rng));
}

/// One row per (m, trial). Empty family gives an empty table; the seed fixes every row.
template <typename Scalar = cd>
std::vector<BoundSweepRow> bound_sweep(std::span<const int> family, const BoundSpec& spec, int trials,
                                       std::uint64_t seed, ArgumentMaker<Scalar> maker = {}) {
  const BoundSpec checked = make_bound_spec(spec.which, spec.r);
  std::vector<BoundSweepRow> rows;
  for (int m : family) {
    const FockSpace space(m);
    for (int t = 0; t < trials; ++t) {
      Rng rng = Rng::for_trial(seed, (static_cast<std::uint64_t>(m) << 32) | static_cast<std::uint64_t>(t));
      const auto arg = maker ? maker(m, rng) : random_argument<Scalar>(checked, m, rng);
      detail::require_argument(space, checked, arg);
      const RhsForm form = rhs_form(checked, norm_values(checked, detail::singular_values_of(arg)));
      const auto top = arg.is_diagonal() ? detail::diagonal_lhs_max(checked, arg)
                                         : detail::blocked_lhs_max(space, checked, arg);
      BoundSweepRow row{m, checked.r, t, kInf, 0.0};
      for (int n = 0; n <= m; ++n) {
        const double rhs = form(n);
        row.slack_min = std::min(row.slack_min, rhs - top[static_cast<std::size_t>(n)]);
        if (rhs > 0) row.max_ratio = std::max(row.max_ratio, top[static_cast<std::size_t>(n)] / rhs);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace carlab
