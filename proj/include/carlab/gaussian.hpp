#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "carlab/bounds.hpp"
#include "carlab/quadratics.hpp"

namespace carlab {

/// exp(z Delta^+(C)) Omega = sum_{n <= m/2} z^n Delta^+(C)^n Omega / n!; the series terminates at finite m.
template <typename Scalar = cd>
FockVector<Scalar> gaussian_state(const FockSpace& space, const OneBodyOperator<Scalar>& c, Scalar z) {
  detail::require_size(space, c);
  detail::require_skew(c, "gaussian_state");
  FockVector<Scalar> term = vacuum<Scalar>(space);
  FockVector<Scalar> sum = term;
  for (int n = 1; 2 * n <= space.modes(); ++n) {
    term = apply_delta_plus(c, term);
    term.amplitudes *= z / RealOf<Scalar>(n);
    sum.amplitudes += term.amplitudes;
  }
  return sum;
}

/// c_n = |Delta^+(C)^n Omega|^2 / (n!)^2 for n = 0..floor(m/2); omega(z) = sum_n c_n z^{2n}.
template <typename Scalar = cd>
std::vector<double> omega_coefficients(const FockSpace& space, const OneBodyOperator<Scalar>& c) {
  detail::require_size(space, c);
  detail::require_skew(c, "omega_coefficients");
  std::vector<double> out{1.0};
  FockVector<Scalar> v = vacuum<Scalar>(space);
  for (int n = 1; 2 * n <= space.modes(); ++n) {
    v = apply_delta_plus(c, v);
    v.amplitudes /= RealOf<Scalar>(n);  // keeps v = Delta^+^n Omega / n!
    out.push_back(static_cast<double>(v.amplitudes.squaredNorm()));
  }
  return out;
}

/// |Delta^+(C)^n Omega|^2 for n = 0..floor(m/2) (no factorial normalization).
template <typename Scalar = cd>
std::vector<double> pair_creation_norms(const FockSpace& space, const OneBodyOperator<Scalar>& c) {
  std::vector<double> out{1.0};
  FockVector<Scalar> v = vacuum<Scalar>(space);
  for (int n = 1; 2 * n <= space.modes(); ++n) {
    v = apply_delta_plus(c, v);
    out.push_back(static_cast<double>(v.amplitudes.squaredNorm()));
  }
  return out;
}

inline std::complex<double> evaluate_even_series(std::span<const double> coefficients, std::complex<double> z) {
  const std::complex<double> w = z * z;
  std::complex<double> acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * w + *it;
  return acc;
}

/// omega(z) = (exp(conj z Delta^+) Omega, exp(z Delta^+) Omega) through the even power series.
template <typename Scalar = cd>
std::complex<double> omega_series(const FockSpace& space, const OneBodyOperator<Scalar>& c, std::complex<double> z) {
  const auto coeffs = omega_coefficients(space, c);
  return evaluate_even_series(coeffs, z);
}

/// The same overlap taken directly as an inner product of two Gaussian states.
template <typename Scalar = cd>
std::complex<double> omega_pairing(const FockSpace& space, const OneBodyOperator<Scalar>& c, Scalar z) {
  const auto left = gaussian_state(space, c, Scalar(std::conj(z)));
  const auto right = gaussian_state(space, c, z);
  return static_cast<std::complex<double>>(left.dot(right));
}

/**
 * Power applied to det(Id + 4 z^2 C^*C). The eigenvalues of C^*C of a skew C
 * come in equal pairs, so `square_root` is evaluated without a branch cut as
 * the product over one member of each pair.
 */
enum class DeterminantConvention { full, square_root };

/// Convention reproducing the Fock-space series (established by calibrate_determinant_convention()).
inline constexpr DeterminantConvention kCalibratedConvention = DeterminantConvention::square_root;

/// Eigenvalues mu_j^2 of C^*C, nonincreasing, taken from the singular values of C.
template <typename Scalar = cd>
std::vector<double> paired_gram_eigenvalues(const OneBodyOperator<Scalar>& c) {
  const auto dec = svd(c);
  std::vector<double> lam(static_cast<std::size_t>(dec.mu.size()));
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const double mu = static_cast<double>(dec.mu(static_cast<Eigen::Index>(i)));
    lam[i] = mu * mu;
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return lam;
}

template <typename Scalar = cd>
std::complex<double> omega_determinant(const OneBodyOperator<Scalar>& c, std::complex<double> z,
                                       DeterminantConvention convention = kCalibratedConvention) {
  const auto lam = paired_gram_eigenvalues(c);
  const std::size_t step = convention == DeterminantConvention::square_root ? 2 : 1;
  std::complex<double> det = 1;
  for (std::size_t i = 0; i < lam.size(); i += step) det *= 1.0 + 4.0 * z * z * lam[i];
  return det;
}

/// Zeros +-i/(2 mu) of the determinant formula, one pair per skew singular pair (two under `full`).
template <typename Scalar = cd>
std::vector<std::complex<double>> omega_zeros(const OneBodyOperator<Scalar>& c,
                                              DeterminantConvention convention = kCalibratedConvention) {
  const auto lam = paired_gram_eigenvalues(c);
  std::vector<std::complex<double>> zeros;
  if (lam.empty() || lam.front() == 0) return zeros;
  // singular values below 1e-12 * mu_max are rounding noise (odd m always has one exact zero)
  const double floor = 1e-24 * lam.front();
  const std::size_t step = convention == DeterminantConvention::square_root ? 2 : 1;
  for (std::size_t i = 0; i < lam.size(); i += step) {
    if (lam[i] <= floor) continue;
    const double radius = 1.0 / (2.0 * std::sqrt(lam[i]));
    zeros.emplace_back(0.0, radius);
    zeros.emplace_back(0.0, -radius);
  }
  return zeros;
}

/// Roots in z of sum_n c_n z^{2n}, via companion-matrix eigenvalues of the polynomial in w = z^2.
std::vector<std::complex<double>> even_series_zeros(std::span<const double> coefficients);

/// Largest distance under a greedy nearest-neighbour matching (infinite if the sizes differ).
double zero_set_distance(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b);

struct CalibrationResult {
  DeterminantConvention convention = DeterminantConvention::square_root;
  double reference_series = 0;  // omega at m = 2, C = [[0,-1/2],[1/2,0]], z = 1
  double full_error = 0;        // worst |series - det| over the cases
  double square_root_error = 0; // worst |series - sqrt det| over the cases
};

/// Compare the Fock-space series against both determinant conventions on the reference case and random cases.
CalibrationResult calibrate_determinant_convention(int random_cases, std::uint64_t seed);

struct OrderEstimate {
  double order = 0;
  std::size_t window_begin = 0;  // coefficient index range used in the fit, inclusive
  std::size_t window_end = 0;
  double residual_rms = 0;
};

/**
 * Exponential order of an entire function from the logarithms of its Taylor
 * coefficient magnitudes. Coefficient n multiplies z^{stride * n}; use
 * stride 2 for even series such as omega. Non-finite entries (zero
 * coefficients) are skipped. Fits
 *   -log|a| = alpha d log d + beta d + gamma log d + const,   d = stride * n,
 * over the upper three quarters of the nonzero coefficients and returns
 * 1/alpha, the coefficient formula of the order with its lower-order
 * corrections absorbed. Accurate to +-0.05 on the synthetic families in the
 * tests with 200 terms. Needs at least 20 nonzero coefficients.
 */
OrderEstimate exp_order_estimate(std::span<const double> log_abs_coefficients, int stride = 1);

/// Same, from raw coefficient values.
OrderEstimate exp_order_estimate_from_values(std::span<const double> coefficients, int stride = 1);

/// Worst ratio |Delta^+^{n+1} Omega|^2 / (RHS(2n) |Delta^+^n Omega|^2) under a DeltaPlus bound; <= 1 when the bound holds.
template <typename Scalar = cd>
double coefficient_chain_ratio(const FockSpace& space, const OneBodyOperator<Scalar>& c, const RhsForm& bound) {
  const auto norms = pair_creation_norms(space, c);
  double worst = 0;
  for (std::size_t n = 0; n + 1 < norms.size(); ++n) {
    const double denom = bound(static_cast<int>(2 * n)) * norms[n];
    if (denom > 0) worst = std::max(worst, norms[n + 1] / denom);
  }
  return worst;
}

struct GaussianReport {
  std::vector<double> coefficients;
  std::vector<std::complex<double>> z_grid;
  std::vector<std::complex<double>> series_values;
  std::vector<std::complex<double>> determinant_values;
  double max_abs_diff = 0;  // max |series - det| / (1 + |series|)
  std::vector<std::complex<double>> zeros;
  double zero_match = 0;    // zero_set_distance(formula zeros, polynomial roots)
  double zero_tolerance_scale = 1;
  /// Only meaningful for long coefficient prefixes; at finite m omega is a polynomial.
  double order_estimate = 0;
};

/// z_k = a + i b on a points x points grid over [-radius, radius]^2.
std::vector<std::complex<double>> complex_grid(double radius, int points);

template <typename Scalar = cd>
GaussianReport gaussian_report(const FockSpace& space, const OneBodyOperator<Scalar>& c,
                               std::span<const std::complex<double>> grid,
                               DeterminantConvention convention = kCalibratedConvention) {
  GaussianReport rep;
  rep.coefficients = omega_coefficients(space, c);
  rep.z_grid.assign(grid.begin(), grid.end());
  for (const auto z : grid) {
    const auto s = evaluate_even_series(rep.coefficients, z);
    const auto d = omega_determinant(c, z, convention);
    rep.series_values.push_back(s);
    rep.determinant_values.push_back(d);
    rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(s - d) / (1 + std::abs(s)));
  }
  rep.zeros = omega_zeros(c, convention);
  if (!rep.zeros.empty()) {
    const auto roots = even_series_zeros(rep.coefficients);
    rep.zero_match = zero_set_distance(rep.zeros, roots);
    for (const auto z : rep.zeros) rep.zero_tolerance_scale = std::max(rep.zero_tolerance_scale, 1 + std::abs(z));
  }
  const auto finite = std::count_if(rep.coefficients.begin(), rep.coefficients.end(), [](double x) { return x > 0; });
  rep.order_estimate = finite >= 20 ? exp_order_estimate_from_values(rep.coefficients, 2).order
                                    : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

}  // namespace carlab
