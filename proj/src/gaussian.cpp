#include "carlab/gaussian.hpp"

#include <Eigen/QR>

namespace carlab {

std::vector<std::complex<double>> even_series_zeros(std::span<const double> coefficients) {
  std::size_t degree = coefficients.size();
  double top = 0;
  for (double c : coefficients) top = std::max(top, std::abs(c));
  while (degree > 0 && std::abs(coefficients[degree - 1]) <= 1e-15 * top) --degree;
  std::vector<std::complex<double>> zeros;
  if (degree <= 1) return zeros;
  const auto d = static_cast<Eigen::Index>(degree - 1);  // polynomial degree in w = z^2
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
  const double lead = coefficients[degree - 1];
  for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -coefficients[static_cast<std::size_t>(i)] / lead;
  for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto root = std::sqrt(es.eigenvalues()(i));
    zeros.push_back(root);
    zeros.push_back(-root);
  }
  return zeros;
}

double zero_set_distance(std::span<const std::complex<double>> a, std::span<const std::complex<double>> b) {
  if (a.size() != b.size()) return kInf;
  std::vector<bool> used(b.size(), false);
  double worst = 0;
  for (const auto za : a) {
    std::size_t best = b.size();
    double best_dist = kInf;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(za - b[j]);
      if (dist < best_dist) {
        best_dist = dist;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_dist);
  }
  return worst;
}

CalibrationResult calibrate_determinant_convention(int random_cases, std::uint64_t seed) {
  CalibrationResult out;
  auto record = [&](const FockSpace& space, const OneBodyOperator<cd>& c, std::complex<double> z) {
    const auto series = omega_series(space, c, z);
    const double scale = 1 + std::abs(series);
    out.full_error = std::max(out.full_error, std::abs(series - omega_determinant(c, z, DeterminantConvention::full)) / scale);
    out.square_root_error =
        std::max(out.square_root_error, std::abs(series - omega_determinant(c, z, DeterminantConvention::square_root)) / scale);
    return series;
  };

  Eigen::MatrixXcd ref(2, 2);
  ref << 0.0, -0.5, 0.5, 0.0;
  out.reference_series = record(FockSpace(2), OneBodyOperator<cd>(ref), 1.0).real();

  for (int t = 0; t < random_cases; ++t) {
    Rng rng = Rng::for_trial(seed, static_cast<std::uint64_t>(t));
    const int m = 2 + static_cast<int>(rng.bits() % 7);  // 2..8
    const FockSpace space(m);
    const OneBodyOperator<cd> c(random_skew<cd>(m, rng));
    record(space, c, rng.complex_normal());
  }
  out.convention = out.square_root_error <= out.full_error ? DeterminantConvention::square_root
                                                           : DeterminantConvention::full;
  return out;
}

std::vector<std::complex<double>> complex_grid(double radius, int points) {
  std::vector<std::complex<double>> grid;
  if (points <= 0) return grid;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < points; ++j) {
      const double re = points == 1 ? 0.0 : -radius + 2 * radius * i / (points - 1);
      const double im = points == 1 ? 0.0 : -radius + 2 * radius * j / (points - 1);
      grid.emplace_back(re, im);
    }
  }
  return grid;
}

OrderEstimate exp_order_estimate(std::span<const double> log_abs_coefficients, int stride) {
  if (stride < 1) throw ValidationError("exp_order_estimate: stride must be positive");
  std::vector<std::size_t> index;
  for (std::size_t n = 0; n < log_abs_coefficients.size(); ++n) {
    if (std::isfinite(log_abs_coefficients[n]) && static_cast<std::size_t>(stride) * n >= 2) index.push_back(n);
  }
  if (index.size() < 20) {
    throw ValidationError("exp_order_estimate needs at least 20 nonzero coefficients, got " + std::to_string(index.size()));
  }
  const std::size_t first = index.size() / 4;
  const auto rows = static_cast<Eigen::Index>(index.size() - first);
  Eigen::MatrixXd design(rows, 4);
  Eigen::VectorXd target(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const std::size_t n = index[first + static_cast<std::size_t>(i)];
    const double d = static_cast<double>(stride) * static_cast<double>(n);
    design(i, 0) = d * std::log(d);
    design(i, 1) = d;
    design(i, 2) = std::log(d);
    design(i, 3) = 1.0;
    target(i) = -log_abs_coefficients[n];
  }
  const Eigen::VectorXd scale = design.colwise().norm().transpose();
  const Eigen::MatrixXd scaled = design * scale.cwiseInverse().asDiagonal();
  const Eigen::VectorXd coef = scaled.colPivHouseholderQr().solve(target).cwiseQuotient(scale);
  const Eigen::VectorXd fit = design * coef;

  OrderEstimate out;
  out.order = coef(0) > 0 ? 1.0 / coef(0) : kInf;
  out.window_begin = index[first];
  out.window_end = index.back();
  out.residual_rms = std::sqrt((fit - target).squaredNorm() / static_cast<double>(rows));
  return out;
}

OrderEstimate exp_order_estimate_from_values(std::span<const double> coefficients, int stride) {
  std::vector<double> logs(coefficients.size());
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    logs[i] = coefficients[i] == 0 ? -kInf : std::log(std::abs(coefficients[i]));
  }
  return exp_order_estimate(logs, stride);
}

}  // namespace carlab
