#include <doctest.h>

#include <cmath>
#include <vector>

#include "carlab/bounds.hpp"
#include "oracles.hpp"

using namespace carlab;
using Op = OneBodyOperator<cd>;

namespace {

// Schatten norm straight from Eigen's singular values.
double oracle_norm(const MatrixXcd& b, double r) {
  const Eigen::VectorXd mu = Eigen::JacobiSVD<MatrixXcd>(b).singularValues();
  if (std::isinf(r)) return mu.maxCoeff();
  return std::pow(mu.array().pow(r).sum(), 1 / r);
}

// RHS eigenvalue on the n-particle sector, written out case by case.
double oracle_rhs(BoundKind kind, double r, const MatrixXcd& b, int n) {
  const double s = std::isinf(r) ? 2.0 : 2 * (r - 1) / r;
  const double nr = oracle_norm(b, r), hs = oracle_norm(b, 2);
  switch (kind) {
    case BoundKind::dGamma:
      if (r == 1) return nr * nr;
      if (r < 2) return nr * nr * std::pow(n, s) + hs * hs;
      return nr * nr * std::pow(n, s);
    case BoundKind::Delta:
      return r == 1 ? nr * nr : nr * nr * std::pow(n, s) + hs * hs;
    case BoundKind::DeltaPlus:
      return r == 1 ? nr * nr : nr * nr * std::pow(n, s) + 3 * hs * hs;
    case BoundKind::improved_r2:
      return hs * hs * (n + 2);
    default:
      return 0;
  }
}

// min over sectors of RHS(n) - lambda_max(Q^*Q on sector n), with Q from the Kronecker oracle.
double oracle_slack(const FockSpace& space, BoundKind kind, double r, const MatrixXcd& b) {
  MatrixXcd q;
  if (quadratic_of(kind) == Quadratic::d_gamma) q = oracle::product_d_gamma(space, b);
  else if (quadratic_of(kind) == Quadratic::delta) q = oracle::product_delta(space, b);
  else q = oracle::product_delta_plus(space, b);
  const MatrixXcd lhs = q.adjoint() * q;
  double slack = kInf;
  for (int n = 0; n <= space.modes(); ++n) {
    const auto begin = Eigen::Index(space.sector_begin(n)), size = Eigen::Index(space.sector_size(n));
    const MatrixXcd blk = lhs.block(begin, begin, size, size);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(blk, Eigen::EigenvaluesOnly);
    slack = std::min(slack, oracle_rhs(kind, r, b, n) - es.eigenvalues().maxCoeff());
  }
  return slack;
}

}  // namespace

TEST_CASE("exponent parsing and BoundSpec validation") {
  CHECK(parse_exponent("4/3") == doctest::Approx(4.0 / 3.0));
  CHECK(parse_exponent("1.5") == 1.5);
  CHECK(std::isinf(parse_exponent("inf")));
  CHECK_THROWS_AS(parse_exponent("x"), ValidationError);
  CHECK_THROWS_AS(parse_exponent("1/0"), ValidationError);
  CHECK(make_bound_spec(BoundKind::dGamma, 3).s() == doctest::Approx(4.0 / 3.0));
  CHECK(make_bound_spec(BoundKind::dGamma, kInf).s() == 2.0);
  CHECK(make_bound_spec(BoundKind::dGamma, 1).s() == 0.0);
  CHECK_THROWS_AS(make_bound_spec(BoundKind::dGamma, 0.5), ValidationError);
  CHECK_THROWS_AS(make_bound_spec(BoundKind::Delta, 3), ValidationError);
  CHECK_THROWS_AS(make_bound_spec(BoundKind::DeltaPlus, kInf), ValidationError);
  CHECK_THROWS_AS(make_bound_spec(BoundKind::improved_r2, 1.5), ValidationError);
  CHECK_THROWS_AS(make_bound_spec(BoundKind::literature_dGamma, 2), ValidationError);
  for (auto k : {BoundKind::dGamma, BoundKind::Delta, BoundKind::DeltaPlus, BoundKind::basic,
                 BoundKind::literature_dGamma, BoundKind::literature_Delta, BoundKind::literature_DeltaPlus,
                 BoundKind::improved_r2}) {
    CHECK(parse_bound_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_bound_kind("Gamma"), ValidationError);
}

TEST_CASE("rhs forms") {
  const FockSpace space(3);
  NormValues unit{1.0, std::nullopt};
  auto rhs = rhs_operator(space, make_bound_spec(BoundKind::dGamma, kInf), unit);
  for (std::size_t i = 0; i < space.dim(); ++i) {
    const double n = space.particle_number(i);
    CHECK(rhs.matrix(Eigen::Index(i), Eigen::Index(i)).real() == n * n);
  }
  NormValues c{2.5, std::nullopt};
  rhs = rhs_operator(space, make_bound_spec(BoundKind::dGamma, 1), c);
  CHECK(max_abs(MatrixXcd(rhs.matrix - 6.25 * identity(space).matrix)) == 0.0);

  NormValues both{2.0, 3.0};
  const RhsForm f = rhs_form(make_bound_spec(BoundKind::dGamma, 1.5), both);
  CHECK(f.exponent == doctest::Approx(2.0 / 3.0));
  CHECK(f(0) == doctest::Approx(9.0));
  CHECK(f(2) == doctest::Approx(4 * std::pow(2.0, 2.0 / 3.0) + 9));
  CHECK_THROWS_AS(rhs_form(make_bound_spec(BoundKind::dGamma, 1.5), unit), ValidationError);

  CHECK(rhs_form(make_bound_spec(BoundKind::DeltaPlus, 1.5), both).delta == doctest::Approx(27.0));
  CHECK(rhs_form(make_bound_spec(BoundKind::Delta, 1.5), both).delta == doctest::Approx(9.0));
  const RhsForm imp = rhs_form(make_bound_spec(BoundKind::improved_r2, 2), NormValues{3.0, std::nullopt});
  CHECK(imp(0) == doctest::Approx(18.0));
  CHECK(imp(4) == doctest::Approx(54.0));
  const RhsForm lit = rhs_form(make_bound_spec(BoundKind::literature_DeltaPlus, 2), NormValues{2.0, std::nullopt});
  CHECK(lit(1) == doctest::Approx(36.0));
  // vacuum with s > 0 gives 0^s = 0
  CHECK(rhs_form(make_bound_spec(BoundKind::dGamma, 3), unit)(0) == 0.0);
}

TEST_CASE("saturation at B = Id, r = inf") {
  for (int m = 1; m <= 6; ++m) {
    const FockSpace space(m);
    const BoundSpec spec = make_bound_spec(BoundKind::dGamma, kInf);
    const auto exact = verify_bound(space, spec, Op::identity(m));
    CHECK(exact.pass);
    CHECK(exact.slack_min == 0.0);
    const auto dense = verify_bound(space, spec, Op::identity(m), {BoundPath::dense});
    CHECK(dense.slack_min == 0.0);
    const auto blocked = verify_bound(space, spec, Op::identity(m), {BoundPath::blocked});
    CHECK(std::abs(blocked.slack_min) < 1e-12);
  }
}

TEST_CASE("rank-one projector at r = 1") {
  const FockSpace space(4);
  Rng rng(3);
  const VectorXcd v = random_vector(4, rng).normalized();
  const auto verdict = verify_bound(space, make_bound_spec(BoundKind::dGamma, 1), Op(MatrixXcd(v * v.adjoint())));
  CHECK(verdict.pass);
  CHECK(std::abs(verdict.slack_min) < 1e-12);
}

TEST_CASE("verify_bound slack agrees with the Kronecker oracle") {
  Rng rng(17);
  const FockSpace space(5);
  for (double r : {1.0, 4.0 / 3.0, 1.5, 2.0, 3.0, 4.0, kInf}) {
    const MatrixXcd b = ginibre(5, rng);
    const auto v = verify_bound(space, make_bound_spec(BoundKind::dGamma, r), Op(b));
    const double expected = oracle_slack(space, BoundKind::dGamma, r, b);
    CHECK(v.pass);
    CHECK(v.slack_min == doctest::Approx(expected).epsilon(1e-9).scale(1 + std::abs(expected)));
  }
  for (auto kind : {BoundKind::Delta, BoundKind::DeltaPlus}) {
    for (double r : {1.0, 1.5, 2.0}) {
      const MatrixXcd a = random_skew(5, rng);
      const auto v = verify_bound(space, make_bound_spec(kind, r), Op(a));
      const double expected = oracle_slack(space, kind, r, a);
      CHECK(v.pass);
      CHECK(v.slack_min == doctest::Approx(expected).epsilon(1e-9).scale(1 + std::abs(expected)));
    }
  }
  const MatrixXcd c = random_skew(5, rng);
  const auto v = verify_bound(space, make_bound_spec(BoundKind::improved_r2, 2), Op(c));
  CHECK(v.pass);
  CHECK(v.slack_min == doctest::Approx(oracle_slack(space, BoundKind::improved_r2, 2, c)).epsilon(1e-9));
}

TEST_CASE("random Ginibre B at m = 6 passes for each r") {
  const FockSpace space(6);
  Rng rng(6);
  for (double r : {4.0 / 3.0, 1.5, 2.0, 3.0, 4.0}) {
    const auto v = verify_bound(space, make_bound_spec(BoundKind::dGamma, r), Op(ginibre(6, rng)));
    CHECK(v.pass);
    CHECK(v.pass == (v.slack_min >= -v.tolerance));
  }
}

TEST_CASE("dense, blocked and diagonal paths agree") {
  Rng rng(23);
  const FockSpace space(6);
  for (double r : {1.0, 1.5, 3.0, kInf}) {
    const BoundSpec spec = make_bound_spec(BoundKind::dGamma, r);
    const Op b(ginibre(6, rng));
    const auto dense = verify_bound(space, spec, b, {BoundPath::dense});
    const auto blocked = verify_bound(space, spec, b, {BoundPath::blocked});
    CHECK(dense.slack_min == doctest::Approx(blocked.slack_min).epsilon(1e-9).scale(1 + dense.tolerance * 1e8));
    const Op d = Op::diagonal(random_vector(6, rng));
    const auto exact = verify_bound(space, spec, d, {BoundPath::diagonal});
    const auto via_dense = verify_bound(space, spec, d, {BoundPath::dense});
    CHECK(exact.slack_min == doctest::Approx(via_dense.slack_min).epsilon(1e-9).scale(1 + exact.tolerance * 1e8));
  }
  const Op a(random_skew(6, rng));
  for (auto kind : {BoundKind::Delta, BoundKind::DeltaPlus}) {
    const BoundSpec spec = make_bound_spec(kind, 1.5);
    const auto dense = verify_bound(space, spec, a, {BoundPath::dense});
    const auto blocked = verify_bound(space, spec, a, {BoundPath::blocked});
    CHECK(dense.slack_min == doctest::Approx(blocked.slack_min).epsilon(1e-9).scale(1 + dense.tolerance * 1e8));
  }
  CHECK_THROWS_AS(verify_bound(space, make_bound_spec(BoundKind::dGamma, 2), a, {BoundPath::diagonal}), ValidationError);
}

TEST_CASE("argument validation") {
  const FockSpace space(3);
  Rng rng(1);
  const Op b(ginibre(3, rng));
  CHECK_THROWS_AS(verify_bound(space, make_bound_spec(BoundKind::Delta, 2), b), ValidationError);
  CHECK_THROWS_AS(verify_bound(space, make_bound_spec(BoundKind::dGamma, 2), Op(ginibre(4, rng))), ValidationError);
  CHECK_THROWS_AS(verify_bound(space, BoundSpec{BoundKind::Delta, 3}, Op(random_skew(3, rng))), ValidationError);
}

TEST_CASE("large m uses the blocked and diagonal paths") {
  const FockSpace space(12);
  Rng rng(9);
  const auto v = verify_bound(space, make_bound_spec(BoundKind::dGamma, 2), Op::diagonal(random_vector(12, rng)));
  CHECK(v.pass);
  CHECK_THROWS_AS(verify_bound(space, make_bound_spec(BoundKind::dGamma, 2), Op(ginibre(12, rng)), {BoundPath::dense}),
                  ResourceError);
}

TEST_CASE("literature bound dominates sector by sector") {
  const FockSpace space(6);
  Rng rng(31);
  for (int t = 0; t < 5; ++t) {
    const Op b(ginibre(6, rng));
    const auto top = detail::blocked_lhs_max(space, make_bound_spec(BoundKind::dGamma, 2), b);
    const double op_norm = schatten_norm(b, kInf);
    for (double r : {1.0, 1.5, 2.0, 4.0}) {
      if (!verify_bound(space, make_bound_spec(BoundKind::dGamma, r), b).pass) continue;
      for (int n = 0; n <= 6; ++n) CHECK(op_norm * op_norm * n * n - top[std::size_t(n)] >= -1e-8 * (1 + op_norm * op_norm * 36));
    }
    CHECK(verify_bound(space, make_bound_spec(BoundKind::literature_dGamma, kInf), b).pass);
  }
  const Op a(random_skew(6, rng));
  CHECK(verify_bound(space, make_bound_spec(BoundKind::literature_Delta, 2), a).pass);
  CHECK(verify_bound(space, make_bound_spec(BoundKind::literature_DeltaPlus, 2), a).pass);
}

TEST_CASE("basic estimate examples") {
  const std::vector<double> ones(5, 1.0);
  auto v = basic_estimate_check(ones, kInf);
  CHECK(v.pass);
  CHECK(v.slack_min == 0.0);
  v = basic_estimate_check(std::vector<double>{1, 1}, 1);
  CHECK(v.pass);
  CHECK(v.slack_min == 0.0);
  v = basic_estimate_check(std::vector<double>{1, 0.5}, 2);
  CHECK(v.pass);
  // top-two subset: 1.5 <= sqrt(5/4) sqrt(2)
  CHECK(oracle::basic_estimate_enumerated_excess({1, 0.5}, 2) == doctest::Approx(0.0));
  CHECK(std::sqrt(1.25) * std::sqrt(2.0) - 1.5 == doctest::Approx(0.0811388).epsilon(1e-6));
  CHECK_THROWS_AS(basic_estimate_check(std::vector<double>{1, -1}, 2), ValidationError);
}

TEST_CASE("basic estimate agrees with subset enumeration") {
  for (int t = 0; t < 100; ++t) {
    Rng rng = Rng::for_trial(5, std::uint64_t(t));
    const int m = 1 + t % 12;
    std::vector<double> lambda(static_cast<std::size_t>(m));
    for (auto& x : lambda) x = std::abs(rng.normal());
    for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
      const auto v = basic_estimate_check(lambda, p);
      const double excess = oracle::basic_estimate_enumerated_excess(lambda, p);
      CHECK(v.pass);
      CHECK(v.pass == (excess <= v.tolerance));
      CHECK(-v.slack_min == doctest::Approx(excess).epsilon(1e-12).scale(1 + std::abs(excess)));
    }
  }
}

TEST_CASE("basic estimate through the Fock-space operator") {
  const FockSpace space(4);
  Rng rng(2);
  VectorXcd d(4);
  for (int j = 0; j < 4; ++j) d(j) = std::abs(rng.normal());
  for (double p : {1.0, 1.5, 2.0, kInf}) {
    const auto via_fock = verify_bound(space, make_bound_spec(BoundKind::basic, p), Op::diagonal(d), {BoundPath::dense});
    std::vector<double> lambda(4);
    for (int j = 0; j < 4; ++j) lambda[std::size_t(j)] = d(j).real();
    const auto exact = basic_estimate_check(lambda, p);
    CHECK(via_fock.slack_min == doctest::Approx(exact.slack_min).epsilon(1e-12).scale(1));
  }
  CHECK_THROWS_AS(verify_bound(space, make_bound_spec(BoundKind::basic, 2), Op(ginibre(4, rng))), ValidationError);
}

TEST_CASE("bound sweeps") {
  const std::vector<int> family{2, 3, 4};
  const auto spec = make_bound_spec(BoundKind::dGamma, 1.5);
  const auto a = bound_sweep(family, spec, 3, 77);
  const auto b = bound_sweep(family, spec, 3, 77);
  REQUIRE(a.size() == 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].slack_min == b[i].slack_min);
    CHECK(a[i].max_ratio == b[i].max_ratio);
    CHECK(a[i].max_ratio <= 1 + 1e-12);
    CHECK(a[i].slack_min >= 0);
  }
  CHECK(bound_sweep(std::vector<int>{}, spec, 3, 77).empty());

  // B = diag(1/j) at r = 1: record only
  const ArgumentMaker<cd> harmonic = [](int m, Rng&) {
    VectorXcd d(m);
    for (int j = 0; j < m; ++j) d(j) = 1.0 / (j + 1);
    return Op::diagonal(d);
  };
  const auto rows = bound_sweep(std::vector<int>{4, 8, 12}, make_bound_spec(BoundKind::dGamma, 1), 1, 0, harmonic);
  REQUIRE(rows.size() == 3);
  for (const auto& row : rows) CHECK(row.max_ratio == doctest::Approx(1.0));  // all modes occupied saturates r = 1
}
