#include <doctest.h>

#include "carlab/quadratics.hpp"
#include "carlab/spectral.hpp"
#include "oracles.hpp"

using namespace carlab;
using Op = OneBodyOperator<cd>;

namespace {
MatrixXcd j2() {
  MatrixXcd c(2, 2);
  c << 0.0, -1.0, 1.0, 0.0;
  return c;
}
}  // namespace

TEST_CASE("dGamma(Id) is the number operator") {
  for (int m = 1; m <= 5; ++m) {
    const FockSpace space(m);
    CHECK(max_abs(MatrixXcd(d_gamma(space, Op::identity(m)).matrix - number_operator(space).matrix)) == 0.0);
  }
}

TEST_CASE("dGamma of a rank-one projector") {
  const FockSpace space(3);
  MatrixXcd p = MatrixXcd::Zero(3, 3);
  p(0, 0) = 1;
  const auto q = d_gamma(space, Op(p));
  CHECK(max_abs(MatrixXcd(q.matrix - (creation(space, 0) * annihilation(space, 0)).matrix)) == 0.0);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(q.matrix);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    CHECK((std::abs(l) < 1e-14 || std::abs(l - 1) < 1e-14));
  }
}

TEST_CASE("quadratics agree with products of Kronecker creators") {
  Rng rng(21);
  for (int m = 1; m <= 5; ++m) {
    const FockSpace space(m);
    const MatrixXcd b = ginibre(m, rng);
    const MatrixXcd a = random_skew(m, rng);
    CHECK(max_abs(MatrixXcd(d_gamma(space, Op(b)).matrix - oracle::product_d_gamma(space, b))) < 1e-13);
    CHECK(max_abs(MatrixXcd(delta(space, Op(a)).matrix - oracle::product_delta(space, a))) < 1e-13);
    CHECK(max_abs(MatrixXcd(delta_plus(space, Op(a)).matrix - oracle::product_delta_plus(space, a))) < 1e-13);
  }
}

TEST_CASE("basis sums over any orthonormal system give the same operators") {
  const int m = 4;
  const FockSpace space(m);
  Rng rng(8);
  const MatrixXcd u = random_unitary(m, rng);
  const MatrixXcd b = ginibre(m, rng);
  const MatrixXcd a = random_skew(m, rng);
  const auto d = static_cast<Eigen::Index>(space.dim());
  MatrixXcd dg = MatrixXcd::Zero(d, d), dl = MatrixXcd::Zero(d, d), dp = MatrixXcd::Zero(d, d);
  for (int j = 0; j < m; ++j) {
    const VectorXcd e = u.col(j);
    const VectorXcd e_bar = e.conjugate();
    dg += (op_adag(space, VectorXcd(b * e)) * op_a(space, e_bar)).matrix;
    dl += (op_a(space, VectorXcd(a * e)) * op_a(space, e_bar)).matrix;
    dp += (op_adag(space, VectorXcd(a * e)) * op_adag(space, e_bar)).matrix;
  }
  CHECK(max_abs(MatrixXcd(dg - d_gamma(space, Op(b)).matrix)) < 1e-12);
  CHECK(max_abs(MatrixXcd(dl - delta(space, Op(a)).matrix)) < 1e-12);
  CHECK(max_abs(MatrixXcd(dp - delta_plus(space, Op(a)).matrix)) < 1e-12);
}

TEST_CASE("adjoint relations") {
  Rng rng(4);
  const FockSpace space(5);
  const Op b(ginibre(5, rng));
  CHECK(max_abs(MatrixXcd(d_gamma(space, b).adjoint().matrix - d_gamma(space, b.adjoint()).matrix)) < 1e-13);
  const Op a(random_skew(5, rng));
  CHECK(max_abs(MatrixXcd(delta(space, a).adjoint().matrix - delta_plus(space, a.adjoint()).matrix)) < 1e-13);
}

TEST_CASE("delta_plus for m = 2 and C = [[0,-1],[1,0]]") {
  const FockSpace space(2);
  const auto dp = delta_plus(space, Op(j2()));
  const auto two_pair = (creation(space, 1) * creation(space, 0)).matrix;
  CHECK(max_abs(MatrixXcd(dp.matrix - 2.0 * two_pair)) == 0.0);
  const auto image = dp(vacuum(space));
  CHECK(max_abs(VectorXcd(image.amplitudes - 2.0 * slater_state(space, {0, 1}).amplitudes)) == 0.0);
  // with the k < j sign string that is -2 |{1,2}>
  CHECK(image.amplitudes(3) == cd(-2));
}

TEST_CASE("delta annihilates the vacuum") {
  Rng rng(6);
  for (int m = 2; m <= 6; ++m) {
    const FockSpace space(m);
    const auto v = delta(space, Op(random_skew(m, rng)))(vacuum(space));
    CHECK(v.amplitudes.norm() == 0.0);
  }
}

TEST_CASE("skewness is enforced") {
  const FockSpace space(3);
  Rng rng(1);
  const Op b(ginibre(3, rng));
  CHECK_FALSE(b.is_skew());
  CHECK_THROWS_AS(delta(space, b), ValidationError);
  CHECK_THROWS_AS(delta_plus(space, b), ValidationError);
  const Op a = skew_part(b);
  CHECK(a.is_skew());
  CHECK_NOTHROW(delta(space, a));
  // symmetric parts cancel in the double sum, so the projection does not change the operator
  const MatrixXcd raw = oracle::product_delta(space, b.matrix());
  CHECK(max_abs(MatrixXcd(raw - delta(space, a).matrix)) < 1e-13);
  CHECK_THROWS_AS(d_gamma(space, Op(MatrixXcd::Identity(2, 2))), ValidationError);
}

TEST_CASE("self-adjoint and skew flags") {
  Rng rng(2);
  const MatrixXcd g = ginibre(4, rng);
  CHECK(Op(MatrixXcd(g + g.adjoint())).is_self_adjoint());
  CHECK_FALSE(Op(g).is_self_adjoint());
  CHECK(Op(MatrixXcd(g - g.transpose())).is_skew());
  CHECK(Op(MatrixXcd::Zero(3, 3)).is_skew());
  CHECK_THROWS_AS(Op(MatrixXcd::Zero(2, 3)), ValidationError);
}

TEST_CASE("commutator: hand-derived m = 2 case") {
  const FockSpace space(2);
  const Op c(j2());
  const Op a(MatrixXcd(-j2()));
  const auto lhs = commutator(delta(space, a), delta_plus(space, c));
  const MatrixXcd expected = -4.0 * number_operator(space).matrix + 4.0 * identity(space).matrix;
  CHECK(max_abs(MatrixXcd(lhs.matrix - expected)) == 0.0);
  const auto rep = check_commutator(space, a, c);
  CHECK(rep.residual == 0.0);
  CHECK(rep.pass());
}

TEST_CASE("commutator: zero arguments") {
  const FockSpace space(3);
  const Op zero(MatrixXcd::Zero(3, 3));
  const auto rep = check_commutator(space, zero, zero);
  CHECK(rep.residual == 0.0);
}

TEST_CASE("commutator identity on random skew pairs") {
  for (int m = 2; m <= 8; ++m) {
    const FockSpace space(m);
    for (int t = 0; t < (m <= 6 ? 5 : 1); ++t) {
      Rng rng = Rng::for_trial(99, std::uint64_t(m * 100 + t));
      const auto rep = check_commutator(space, Op(random_skew(m, rng)), Op(random_skew(m, rng)));
      CHECK(rep.pass());
    }
  }
}

TEST_CASE("grading") {
  Rng rng(12);
  const FockSpace space(4);
  CHECK(check_grading(d_gamma(space, Op(ginibre(4, rng)))));
  CHECK(check_grading(delta(space, Op(random_skew(4, rng)))));
  CHECK(check_grading(delta_plus(space, Op(random_skew(4, rng)))));
  CHECK(check_grading(creation(space, 2)));
  CHECK(check_grading(annihilation(space, 0)));
  auto wrong = delta_plus(space, Op(random_skew(4, rng)));
  wrong.grading_shift = 0;
  CHECK_FALSE(check_grading(wrong));
  wrong.grading_shift.reset();
  CHECK_THROWS_AS(check_grading(wrong), ValidationError);
  // products compose shifts
  const auto prod = delta(space, Op(random_skew(4, rng))) * creation(space, 1);
  CHECK(prod.grading_shift == -1);
  CHECK(check_grading(prod));
}

TEST_CASE("linearity in the one-body argument") {
  Rng rng(15);
  const FockSpace space(4);
  const cd alpha(0.7, 0.2), beta(-1.1, 0.5);
  const MatrixXcd b1 = ginibre(4, rng), b2 = ginibre(4, rng);
  const MatrixXcd lhs = d_gamma(space, Op(MatrixXcd(alpha * b1 + beta * b2))).matrix;
  const MatrixXcd rhs = alpha * d_gamma(space, Op(b1)).matrix + beta * d_gamma(space, Op(b2)).matrix;
  CHECK(max_abs(MatrixXcd(lhs - rhs)) < 1e-12 * (1 + max_abs(rhs)));
  const MatrixXcd a1 = random_skew(4, rng), a2 = random_skew(4, rng);
  const MatrixXcd dl = delta(space, Op(MatrixXcd(alpha * a1 + beta * a2))).matrix;
  const MatrixXcd dr = alpha * delta(space, Op(a1)).matrix + beta * delta(space, Op(a2)).matrix;
  CHECK(max_abs(MatrixXcd(dl - dr)) < 1e-12 * (1 + max_abs(dr)));
  const MatrixXcd pl = delta_plus(space, Op(MatrixXcd(alpha * a1 + beta * a2))).matrix;
  const MatrixXcd pr = alpha * delta_plus(space, Op(a1)).matrix + beta * delta_plus(space, Op(a2)).matrix;
  CHECK(max_abs(MatrixXcd(pl - pr)) < 1e-12 * (1 + max_abs(pr)));
}

TEST_CASE("positivity transfer") {
  for (int m = 2; m <= 6; ++m) {
    Rng rng(m);
    const FockSpace space(m);
    const auto q = d_gamma(space, Op(random_psd(m, rng)));
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(q.matrix, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10);
  }
}

TEST_CASE("Slater expectations") {
  const FockSpace space(3);
  VectorXcd d(3);
  d << 1.0, 0.5, 1.0 / 3.0;
  const std::vector<int> all{0, 1, 2};
  const auto e = slater_expectation(space, Op::diagonal(d), std::span<const int>(all));
  CHECK(e.pass);
  CHECK(e.fock.real() == doctest::Approx(11.0 / 6.0).epsilon(1e-14));
  CHECK(e.diagonal.real() == doctest::Approx(11.0 / 6.0).epsilon(1e-14));

  const auto empty = slater_expectation(space, Op::diagonal(d), std::span<const int>());
  CHECK(empty.fock == cd(0));

  Rng rng(31);
  const FockSpace five(5);
  const Op b(ginibre(5, rng));
  for (std::size_t i = 0; i < five.dim(); ++i) {
    const auto modes = occupied_modes(five.mask(i));
    const auto r = slater_expectation(five, b, std::span<const int>(modes));
    CHECK(r.pass);
    const auto n = slater_expectation(five, Op::identity(5), std::span<const int>(modes));
    CHECK(n.fock.real() == doctest::Approx(double(modes.size())));
  }
}

TEST_CASE("sector-blocked storage matches the dense operators") {
  Rng rng(44);
  const FockSpace space(6);
  const Op b(ginibre(6, rng));
  const Op a(random_skew(6, rng));
  CHECK(max_abs(MatrixXcd(d_gamma_blocked(space, b).to_dense().matrix - d_gamma(space, b).matrix)) == 0.0);
  CHECK(max_abs(MatrixXcd(delta_blocked(space, a).to_dense().matrix - delta(space, a).matrix)) == 0.0);
  CHECK(max_abs(MatrixXcd(delta_plus_blocked(space, a).to_dense().matrix - delta_plus(space, a).matrix)) == 0.0);
  const auto q = delta_blocked(space, a);
  const MatrixXcd dense_gram = delta(space, a).matrix.adjoint() * delta(space, a).matrix;
  CHECK(max_abs(MatrixXcd(q.gram().to_dense().matrix - dense_gram)) < 1e-12);
  CHECK(max_abs(MatrixXcd(q.adjoint().to_dense().matrix - delta_plus(space, a.adjoint()).matrix)) < 1e-14);
}

TEST_CASE("beyond the dense limit") {
  const FockSpace space(12);
  Rng rng(2);
  const Op b(ginibre(12, rng));
  CHECK_THROWS_AS(d_gamma(space, b), ResourceError);
  const auto blocked = d_gamma_blocked(space, b);
  CHECK(blocked.block(6).rows() == 924);
  // blocked action agrees with the matrix-free one
  FockVector<cd> v{space, random_vector(int(space.dim()), rng)};
  CHECK(max_abs(VectorXcd(blocked(v).amplitudes - apply_d_gamma(b, v).amplitudes)) < 1e-11);
}
