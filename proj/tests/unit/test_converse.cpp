#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "carlab/converse.hpp"

using namespace carlab;
using Op = OneBodyOperator<cd>;

namespace {
double harmonic_number(std::size_t n) {
  double h = 0;
  for (std::size_t j = n; j >= 1; --j) h += 1.0 / double(j);
  return h;
}
}  // namespace

TEST_CASE("decay families") {
  const auto h = decay_family(DecayKind::harmonic, 3);
  CHECK(h.is_diagonal());
  CHECK(h(0, 0) == cd(1));
  CHECK(h(1, 1) == cd(0.5));
  CHECK(h(2, 2).real() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const auto p = decay_singular_values(DecayKind::power_decay, 4, 1.0);
  CHECK(p[0] == 1.0);
  CHECK(p[1] == doctest::Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(p[2] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(p[3] == doctest::Approx(0.5).epsilon(1e-15));
  const auto q = decay_singular_values(DecayKind::power_decay, 50, 0.5);
  for (std::size_t j = 1; j < q.size(); ++j) CHECK(q[j] < q[j - 1]);
  CHECK_THROWS_AS(decay_singular_values(DecayKind::power_decay, 4, 0.0), ValidationError);
  CHECK_THROWS_AS(decay_singular_values(DecayKind::power_decay, 4, 2.0), ValidationError);
}

TEST_CASE("sector norms of diagonal operators") {
  const auto h = decay_singular_values(DecayKind::harmonic, 3);
  CHECK(sector_norm_diagonal(h, 3) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
  CHECK(sector_norm_diagonal(h, 0) == 0.0);
  CHECK_THROWS_AS(sector_norm_diagonal(h, 4), ValidationError);
}

TEST_CASE("sector norm agrees with Fock eigenvalues") {
  Rng rng(3);
  for (int m = 1; m <= 10; ++m) {
    std::vector<double> lambda(static_cast<std::size_t>(m));
    for (auto& x : lambda) x = std::abs(rng.normal());
    VectorXcd d(m);
    for (int j = 0; j < m; ++j) d(j) = lambda[std::size_t(j)];
    const FockSpace space(m);
    const auto blocked = d_gamma_blocked(space, Op::diagonal(d));
    for (int n = 0; n <= m; ++n) {
      const MatrixXcd blk = blocked.block(n);
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(blk, Eigen::EigenvaluesOnly);
      CHECK(std::abs(sector_norm_diagonal(lambda, std::size_t(n)) - es.eigenvalues().maxCoeff()) <= 1e-12);
    }
  }
}

TEST_CASE("sector norms are permutation invariant") {
  std::mt19937_64 engine(5);
  auto lambda = decay_singular_values(DecayKind::power_decay, 200, 1.2);
  std::vector<double> reference;
  for (std::size_t n = 0; n <= lambda.size(); n += 10) reference.push_back(sector_norm_diagonal(lambda, n));
  for (int t = 0; t < 5; ++t) {
    std::shuffle(lambda.begin(), lambda.end(), engine);
    std::size_t k = 0;
    for (std::size_t n = 0; n <= lambda.size(); n += 10) CHECK(sector_norm_diagonal(lambda, n) == reference[k++]);
  }
}

TEST_CASE("Slater expectations on decay families") {
  for (int m = 2; m <= 10; m += 4) {
    const FockSpace space(m);
    for (auto b : {decay_family(DecayKind::harmonic, m), decay_family(DecayKind::power_decay, m, 1.0)}) {
      for (std::size_t i = 0; i < space.dim(); ++i) {
        const auto modes = occupied_modes(space.mask(i));
        CHECK(slater_expectation(space, b, std::span<const int>(modes)).pass);
      }
    }
  }
}

TEST_CASE("log grid") {
  const auto g = log_grid(10, 100000, 20);
  CHECK(g.front() == 10);
  CHECK(g.back() == 100000);
  CHECK(std::adjacent_find(g.begin(), g.end(), std::greater_equal<>()) == g.end());
  CHECK(g.size() > 60);
  CHECK_THROWS_AS(log_grid(0, 10), ValidationError);
}

TEST_CASE("power decay sweeps") {
  const auto grid = log_grid(10, 100000);
  auto res = sharpness_sweep(DecayKind::power_decay, 1.0, grid);
  CHECK(res.window_lo == 10000);
  CHECK(res.window_hi == 100000);
  CHECK(res.pass);
  CHECK(std::abs(res.slope - 0.5) <= 0.02);
  CHECK(std::is_sorted(res.partial_sums.begin(), res.partial_sums.end()));
  // partial sums of j^{-1/2}: 2 sqrt(n) + zeta(1/2) + n^{-1/2}/2 + O(n^{-3/2})
  CHECK(res.partial_sums.back() == doctest::Approx(2 * std::sqrt(1e5) - 1.4603545088 + 0.5 / std::sqrt(1e5)).epsilon(1e-10));

  res = sharpness_sweep(DecayKind::power_decay, 1.8, grid);
  CHECK(res.pass);
  CHECK(std::abs(res.slope - 0.9) <= 0.02);
}

TEST_CASE("slopes approach s/2 as the window moves outward") {
  const auto grid = log_grid(10, 100000);
  for (double s : {0.5, 1.0, 1.5}) {
    double previous = kInf;
    for (std::size_t lo : {10ul, 100ul, 1000ul, 10000ul}) {
      const auto res = sharpness_sweep(DecayKind::power_decay, s, grid, lo, lo * 10);
      const double err = std::abs(res.slope - s / 2);
      CHECK(err < previous);
      previous = err;
    }
  }
}

TEST_CASE("harmonic sweep") {
  const auto grid = log_grid(10, 100000);
  const auto res = sharpness_sweep(DecayKind::harmonic, 0.0, grid);
  CHECK(res.pass);
  CHECK(std::abs(res.slope - 1.0) <= 0.02);
  CHECK(res.sector_norms.back() >= 12.0);
  CHECK(res.sector_norms.back() == doctest::Approx(harmonic_number(100000)).epsilon(1e-12));
  CHECK(res.sector_norms.back() == doctest::Approx(std::log(1e5) + 0.5772156649).epsilon(1e-5));
}

TEST_CASE("Schatten recovery certificates") {
  const std::vector<double> eps{0.0, 0.1};
  auto rep = schatten_recovery_check(1.0, eps);
  CHECK(rep.r == doctest::Approx(2.0));
  CHECK(rep.pass);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].exponent == doctest::Approx(1.0));
  CHECK(rep.rows[0].certified_divergent);
  CHECK(rep.rows[0].partial_sum == doctest::Approx(harmonic_number(1000000)).epsilon(1e-12));
  CHECK(rep.rows[0].decade_increment == doctest::Approx(std::log(10.0)).epsilon(1e-5));
  CHECK(rep.rows[1].exponent == doctest::Approx(1.05));
  CHECK(rep.rows[1].certified_convergent);
  CHECK(rep.rows[1].upper_total == doctest::Approx(21.0));
  // the partial sum at 10^6 is far from its limit zeta(1.05) ~ 20.58: only the certificate decides
  CHECK(rep.rows[1].partial_sum < 0.6 * 20.5808);
  CHECK(rep.rows[1].tail_bound > 5);

  rep = schatten_recovery_check(0.5, std::vector<double>{0.0, 0.05, 0.2}, 100000);
  CHECK(rep.r == doctest::Approx(4.0 / 3.0));
  CHECK(rep.pass);
  CHECK(rep.rows[0].exponent == doctest::Approx(1.0));
  CHECK_THROWS_AS(schatten_recovery_check(2.0, eps), ValidationError);
  CHECK_THROWS_AS(schatten_recovery_check(1.0, std::vector<double>{-0.1}), ValidationError);
}

TEST_CASE("trace bounds") {
  const FockSpace space(6);
  auto res = trace_bound_check(space, decay_family(DecayKind::harmonic, 6), 6, 1.0);
  CHECK(res.pass);
  for (const auto& row : res.rows) {
    CHECK(row.diagonal_sum == doctest::Approx(harmonic_number(row.n)).epsilon(1e-12));
    CHECK(row.mu_sum == doctest::Approx(harmonic_number(row.n)).epsilon(1e-12));
  }
  res = trace_bound_check(space, Op(MatrixXcd::Zero(6, 6)), 6, 2.0);
  CHECK(res.pass);
  for (const auto& row : res.rows) {
    CHECK(row.diagonal_sum == 0.0);
    CHECK(row.mu_sum == 0.0);
  }
  res = trace_bound_check(space, Op::identity(6), 6, kInf);
  CHECK(res.pass);
  for (const auto& row : res.rows) {
    CHECK(row.mu_sum == doctest::Approx(double(row.n)));
    CHECK(row.envelope == doctest::Approx(double(row.n)));
  }
  CHECK(res.slope == doctest::Approx(1.0));

  Rng rng(4);
  for (double r : {1.0, 1.5, 2.0, 3.0}) CHECK(trace_bound_check(space, Op(ginibre(6, rng)), 6, r).pass);
  CHECK_THROWS_AS(trace_bound_check(space, Op::identity(6), 7, 2.0), ValidationError);
}
