#include "carlab/converse.hpp"

#include <functional>
#include <numeric>

namespace carlab {

std::vector<double> decay_singular_values(DecayKind kind, std::size_t m, double s) {
  if (kind == DecayKind::power_decay && !(s > 0 && s < 2)) {
    throw ValidationError("power_decay needs 0 < s < 2, got " + std::to_string(s));
  }
  std::vector<double> mu(m);
  const double exponent = kind == DecayKind::harmonic ? -1.0 : s / 2 - 1;
  for (std::size_t j = 0; j < m; ++j) mu[j] = std::pow(static_cast<double>(j + 1), exponent);
  return mu;
}

double sector_norm_diagonal(std::span<const double> lambda, std::size_t n) {
  if (n > lambda.size()) throw ValidationError("sector_norm_diagonal: n exceeds the number of modes");
  std::vector<double> sorted(lambda.begin(), lambda.end());
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n), sorted.end(), std::greater<>());
  return std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
}

std::vector<std::size_t> log_grid(std::size_t n_min, std::size_t n_max, int points_per_decade) {
  if (n_min < 1 || n_max < n_min || points_per_decade < 1) throw ValidationError("log_grid: need 1 <= n_min <= n_max");
  std::vector<std::size_t> grid;
  const double lo = std::log10(static_cast<double>(n_min));
  const double hi = std::log10(static_cast<double>(n_max));
  const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) * points_per_decade)));
  for (int i = 0; i <= steps; ++i) {
    const auto n = static_cast<std::size_t>(std::llround(std::pow(10.0, lo + (hi - lo) * i / steps)));
    if (grid.empty() || n > grid.back()) grid.push_back(std::clamp(n, n_min, n_max));
  }
  if (grid.back() != n_max) grid.push_back(n_max);
  return grid;
}

double fit_loglog_slope(std::span<const std::size_t> n, std::span<const double> values, std::size_t lo, std::size_t hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < lo || n[i] > hi || !(values[i] > 0)) continue;
    const double x = std::log(static_cast<double>(n[i]));
    const double y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 2) throw ValidationError("fit_loglog_slope: fewer than two points in the window");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

namespace {
double fit_semilog_slope(std::span<const std::size_t> n, std::span<const double> values, std::size_t lo, std::size_t hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] < lo || n[i] > hi) continue;
    const double x = std::log(static_cast<double>(n[i]));
    sx += x;
    sy += values[i];
    sxx += x * x;
    sxy += x * values[i];
    ++count;
  }
  if (count < 2) throw ValidationError("sharpness_sweep: fewer than two grid points in the window");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}
}  // namespace

SweepResult sharpness_sweep(DecayKind kind, double s, std::span<const std::size_t> n_grid, std::size_t window_lo,
                            std::size_t window_hi) {
  if (n_grid.empty()) throw ValidationError("sharpness_sweep: empty grid");
  SweepResult out;
  out.kind = kind;
  out.s = kind == DecayKind::harmonic ? 0.0 : s;
  out.n.assign(n_grid.begin(), n_grid.end());
  std::sort(out.n.begin(), out.n.end());
  const std::size_t n_max = out.n.back();
  const auto mu = decay_singular_values(kind, n_max, s);

  // mu is already nonincreasing, so sector norms are prefix sums
  std::vector<double> prefix(n_max + 1, 0.0);
  for (std::size_t j = 0; j < n_max; ++j) prefix[j + 1] = prefix[j] + mu[j];
  for (std::size_t n : out.n) {
    out.partial_sums.push_back(prefix[n]);
    out.sector_norms.push_back(prefix[n]);
  }
  out.window_lo = window_lo ? window_lo : std::max<std::size_t>(1, n_max / 10);
  out.window_hi = window_hi ? window_hi : n_max;
  if (kind == DecayKind::harmonic) {
    out.target_slope = 1.0;
    out.slope = fit_semilog_slope(out.n, out.sector_norms, out.window_lo, out.window_hi);
  } else {
    out.target_slope = s / 2;
    out.slope = fit_loglog_slope(out.n, out.sector_norms, out.window_lo, out.window_hi);
  }
  out.pass = std::abs(out.slope - out.target_slope) <= 0.02;
  return out;
}

RecoveryReport schatten_recovery_check(double s, std::span<const double> epsilons, std::size_t terms) {
  if (!(s > 0 && s < 2)) throw ValidationError("schatten_recovery_check needs 0 < s < 2");
  if (terms < 10) throw ValidationError("schatten_recovery_check needs at least 10 terms");
  RecoveryReport rep;
  rep.s = s;
  rep.r = 2 / (2 - s);
  rep.terms = terms;
  rep.pass = true;
  const double big_j = static_cast<double>(terms);
  for (double eps : epsilons) {
    if (eps < 0) throw ValidationError("schatten_recovery_check: epsilon must be >= 0");
    RecoveryRow row;
    row.epsilon = eps;
    row.exponent = (1 - s / 2) * (rep.r + eps);
    // sum smallest terms first
    double sum = 0, sum_decade = 0;
    for (std::size_t j = terms; j >= 1; --j) {
      sum += std::pow(static_cast<double>(j), -row.exponent);
      if (j == terms / 10 + 1) sum_decade = sum;
    }
    row.partial_sum = sum;
    row.decade_increment = sum_decade;  // sum over terms/10 < j <= terms
    const double a = row.exponent;
    const bool unit = std::abs(a - 1) <= 1e-12;
    row.lower_integral = unit ? std::log(big_j + 1) : (std::pow(big_j + 1, 1 - a) - 1) / (1 - a);
    if (a > 1 && !unit) {
      row.upper_total = 1 + 1 / (a - 1);
      row.tail_bound = std::pow(big_j, 1 - a) / (a - 1);
      row.certified_convergent = row.partial_sum <= row.upper_total && row.partial_sum >= row.lower_integral;
    } else {
      row.upper_total = kInf;
      row.tail_bound = kInf;
      // the lower integral bound grows without limit; for a = 1 every decade adds log 10
      row.certified_divergent = row.partial_sum >= row.lower_integral &&
                                (!unit || std::abs(row.decade_increment - std::log(10.0)) <= 1e-4);
    }
    const bool expect_convergent = eps > 0;
    rep.pass = rep.pass && (expect_convergent ? row.certified_convergent : row.certified_divergent);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace carlab
