#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "carlab/bounds.hpp"
#include "carlab/spectral.hpp"

namespace carlab {

enum class DecayKind { power_decay, harmonic };

/// mu_j = j^{s/2 - 1} (power_decay, 0 < s < 2) or 1/j (harmonic), j = 1..m.
std::vector<double> decay_singular_values(DecayKind kind, std::size_t m, double s = 0.0);

template <typename Scalar = cd>
OneBodyOperator<Scalar> decay_family(DecayKind kind, int m, double s = 0.0) {
  const auto mu = decay_singular_values(kind, static_cast<std::size_t>(m), s);
  VectorX<Scalar> d(m);
  for (int j = 0; j < m; ++j) d(j) = Scalar(mu[static_cast<std::size_t>(j)]);
  return OneBodyOperator<Scalar>::diagonal(d);
}

/// Norm of dGamma(diag lambda) on the n-particle sector: the sum of the n largest lambda_j.
double sector_norm_diagonal(std::span<const double> lambda, std::size_t n);

/// Roughly log-spaced integers in [n_min, n_max], always containing both ends.
std::vector<std::size_t> log_grid(std::size_t n_min, std::size_t n_max, int points_per_decade = 20);

/// Least-squares slope of log(value) against log(n) over grid points with lo <= n <= hi.
double fit_loglog_slope(std::span<const std::size_t> n, std::span<const double> values, std::size_t lo, std::size_t hi);

struct SweepResult {
  DecayKind kind = DecayKind::power_decay;
  double s = 0;
  std::vector<std::size_t> n;
  std::vector<double> partial_sums;  // sum_{j <= n} mu_j
  std::vector<double> sector_norms;  // |dGamma(B)| on the n-particle sector
  double slope = 0;
  double target_slope = 0;  // s/2; 1 for harmonic, where the fit is against log n
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  bool pass = false;
};

/**
 * Growth of the n-particle sector norm of the power_decay(s) family (or the
 * harmonic family) along n_grid. The fit window defaults to the top decade
 * [n_max/10, n_max]. Power decay passes iff |slope - s/2| <= 0.02; the
 * harmonic family fits H_n against log n and passes iff |slope - 1| <= 0.02.
 */
SweepResult sharpness_sweep(DecayKind kind, double s, std::span<const std::size_t> n_grid, std::size_t window_lo = 0,
                            std::size_t window_hi = 0);

struct RecoveryRow {
  double epsilon = 0;
  double exponent = 0;        // (1 - s/2)(r + epsilon): mu_j^{r+eps} = j^{-exponent}
  double partial_sum = 0;     // sum_{j <= terms}
  double upper_total = 0;     // 1 + 1/(exponent - 1) when exponent > 1, else inf
  double tail_bound = 0;      // terms^{1-exponent}/(exponent - 1) when exponent > 1, else inf
  double lower_integral = 0;  // int_1^{terms+1} x^{-exponent} dx
  double decade_increment = 0;  // S(terms) - S(terms/10); -> log 10 for the harmonic case
  bool certified_convergent = false;
  bool certified_divergent = false;
};

struct RecoveryReport {
  double s = 0;
  double r = 0;  // 2/(2 - s)
  std::size_t terms = 0;
  std::vector<RecoveryRow> rows;
  bool pass = false;  // every eps > 0 certified convergent, every eps = 0 certified divergent
};

/**
 * Integral-test certificates for the Schatten summability of power_decay(s):
 * sum_j mu_j^{r+eps} converges iff eps > 0, with r = 2/(2-s).
 */
RecoveryReport schatten_recovery_check(double s, std::span<const double> epsilons, std::size_t terms = 1'000'000);

struct TraceBoundRow {
  std::size_t n = 0;
  double diagonal_sum = 0;     // |sum_{j <= n} (e_j, B e_j)| over the right singular vectors
  double diagonal_abs_sum = 0; // sum_{j <= n} |(e_j, B e_j)|
  double mu_sum = 0;           // sum_{j <= n} mu_j(B)
  double hermitian_sum = 0;    // max over H in {B + B^*, i(B - B^*)} of sum_{j <= n} mu_j(H)
  double envelope = 0;         // (gamma_r n^s + delta_r)^{1/2}
};

struct TraceBoundResult {
  double r = 0;
  double s = 0;
  BoundVerdict bound;  // dGamma estimate that supplies gamma_r and delta_r
  RhsForm form;
  std::vector<TraceBoundRow> rows;
  double slope = 0;    // log-log slope of mu_sum over n (when at least two points are positive)
  bool pass = false;
};

namespace detail {
template <typename Scalar>
std::vector<double> hermitian_abs_eigenvalues(const MatrixX<Scalar>& h) {
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> es((h + h.adjoint()) / RealOf<Scalar>(2), Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::abs(double(es.eigenvalues()(i))));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}
}  // namespace detail

/**
 * Finite-size form of the trace argument: a passing dGamma bound with
 * constants (gamma_r, delta_r) forces, for every ONS and n,
 *   |sum_{j<=n} (e_j, B e_j)| <= (gamma_r n^s + delta_r)^{1/2},
 * and, through the self-adjoint parts B + B^* and i(B - B^*),
 *   sum_{j<=n} mu_j <= 4 (gamma_r n^s + delta_r)^{1/2}.
 */
template <typename Scalar = cd>
TraceBoundResult trace_bound_check(const FockSpace& space, const OneBodyOperator<Scalar>& b, std::size_t n_max,
                                   double r) {
  detail::require_size(space, b);
  if (n_max > static_cast<std::size_t>(b.size())) throw ValidationError("trace_bound_check: n_max exceeds the mode count");
  const BoundSpec spec = make_bound_spec(BoundKind::dGamma, r);
  TraceBoundResult out;
  out.r = r;
  out.s = spec.s();
  out.bound = verify_bound(space, spec, b);
  out.form = rhs_form(spec, norm_values(spec, detail::singular_values_of(b)));

  const auto dec = svd(b);
  const MatrixX<Scalar> sym = b.matrix() + b.matrix().adjoint();
  const MatrixX<Scalar> anti = Scalar(std::complex<RealOf<Scalar>>(0, 1)) * (b.matrix() - b.matrix().adjoint());
  const auto mu_sym = detail::hermitian_abs_eigenvalues<Scalar>(sym);
  const auto mu_anti = detail::hermitian_abs_eigenvalues<Scalar>(anti);

  Scalar diag(0);
  double diag_abs = 0, mu_acc = 0, sym_acc = 0, anti_acc = 0;
  bool ok = out.bound.pass;
  std::vector<std::size_t> ns;
  std::vector<double> mus;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto e = dec.right_basis.col(static_cast<Eigen::Index>(n - 1));
    const Scalar d = e.dot(b.matrix() * e);
    diag += d;
    diag_abs += std::abs(d);
    mu_acc += static_cast<double>(dec.mu(static_cast<Eigen::Index>(n - 1)));
    sym_acc += mu_sym[n - 1];
    anti_acc += mu_anti[n - 1];
    TraceBoundRow row{n, static_cast<double>(std::abs(diag)), diag_abs, mu_acc, std::max(sym_acc, anti_acc),
                      std::sqrt(out.form(static_cast<int>(n)))};
    const double slack = out.bound.tolerance;
    ok = ok && row.diagonal_sum <= row.envelope + slack && row.hermitian_sum <= 4 * row.envelope + slack &&
         row.mu_sum <= 4 * row.envelope + slack;
    if (row.mu_sum > 0) {
      ns.push_back(n);
      mus.push_back(row.mu_sum);
    }
    out.rows.push_back(row);
  }
  if (ns.size() >= 2) out.slope = fit_loglog_slope(ns, mus, ns.front(), ns.back());
  out.pass = ok;
  return out;
}

}  // namespace carlab
