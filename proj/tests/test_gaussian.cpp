#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wald/gaussian.hpp"

using namespace wald;

namespace {

Eigen::MatrixXd m2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("validate examples") {
  const auto i4 = CovarianceMatrix::validate(Eigen::MatrixXd::Identity(4, 4));
  CHECK(i4.rank() == 4);
  CHECK(i4.full_rank());
  const auto ones = CovarianceMatrix::validate(m2(1, 1, 1, 1));
  CHECK(ones.rank() == 1);
  CHECK_THROWS_AS(CovarianceMatrix::validate(m2(1, 2, 2, 1)), std::invalid_argument);
}

TEST_CASE("validate rejects asymmetry, zero diagonal and non-finite entries") {
  CHECK_THROWS_AS(CovarianceMatrix::validate(m2(1, 0.5, 0.4, 1)), std::invalid_argument);
  CHECK_THROWS_AS(CovarianceMatrix::validate(m2(0, 0, 0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(CovarianceMatrix::validate(m2(1, NAN, NAN, 1)), std::invalid_argument);
  CHECK_THROWS_AS(CovarianceMatrix::validate(Eigen::MatrixXd(2, 3)), std::invalid_argument);
  // Tiny asymmetry is tolerated and symmetrized.
  const auto s = CovarianceMatrix::validate(m2(1, 0.5, 0.5 + 1e-12, 1));
  CHECK(s.matrix()(0, 1) == s.matrix()(1, 0));
}

TEST_CASE("factor examples reconstruct Sigma") {
  const Eigen::MatrixXd d = factor(CovarianceMatrix::validate(m2(4, 0, 0, 9)));
  CHECK((d * d.transpose() - m2(4, 0, 0, 9)).norm() < 1e-14);
  CHECK(std::abs(d.cwiseAbs().maxCoeff() - 3) < 1e-14);
  const Eigen::MatrixXd s = m2(1, 0.5, 0.5, 1);
  const Eigen::MatrixXd b = factor(CovarianceMatrix::validate(s));
  CHECK((b * b.transpose() - s).norm() < 1e-14);
  const Eigen::MatrixXd r = factor(CovarianceMatrix::validate(m2(1, 1, 1, 1)));
  REQUIRE(r.cols() == 1);
  CHECK(std::abs(std::abs(r(0, 0)) - 1) < 1e-14);
  CHECK(r(0, 0) == r(1, 0));
}

TEST_CASE("property: factor reconstructs random PSD matrices of any rank") {
  auto& e = oracle::engine(21);
  for (int t = 0; t < 50; ++t) {
    const int k = 2 + t % 5;
    const int m = 1 + t % k;
    const Eigen::MatrixXd g = oracle::random_matrix(k, m, e);
    Eigen::MatrixXd s = g * g.transpose();
    s.diagonal().array() += 1e-3 * (m == k);
    const auto cov = CovarianceMatrix::validate(s);
    CHECK(cov.rank() == m);
    const Eigen::MatrixXd b = factor(cov);
    CHECK(b.cols() == m);
    CHECK((b * b.transpose() - s).norm() < 1e-10 * s.norm());
    const Eigen::MatrixXd q = rank_reduction_basis(cov);
    Eigen::MatrixXd em = Eigen::MatrixXd::Zero(k, k);
    em.topLeftCorner(m, m).setIdentity();
    CHECK((q * em * q.transpose() - s).norm() < 1e-10 * s.norm());
  }
}

TEST_CASE("sample_mvn moments for I_2 and correlation 0.9") {
  const auto s = MvnSampler(CovarianceMatrix::validate(Eigen::MatrixXd::Identity(2, 2)));
  const Eigen::MatrixXd x = sample_mvn(s, 1'000'000, 5);
  for (int j = 0; j < 2; ++j) {
    const double mean = x.col(j).mean();
    const double var = (x.col(j).array() - mean).square().mean();
    CHECK(std::abs(mean) < 0.005);
    CHECK(std::abs(var - 1) < 0.01);
  }
  const auto c = MvnSampler(CovarianceMatrix::validate(m2(1, 0.9, 0.9, 1)));
  const Eigen::MatrixXd y = sample_mvn(c, 1'000'000, 6);
  const Eigen::ArrayXd a = y.col(0).array() - y.col(0).mean();
  const Eigen::ArrayXd b = y.col(1).array() - y.col(1).mean();
  const double r = (a * b).sum() / std::sqrt(a.square().sum() * b.square().sum());
  CHECK(std::abs(r - 0.9) < 0.005);
}

TEST_CASE("sample_mvn is deterministic in (seed, n)") {
  const auto s = MvnSampler(CovarianceMatrix::validate(m2(2, 0.3, 0.3, 1)));
  const Eigen::MatrixXd a = sample_mvn(s, 1000, 77);
  const Eigen::MatrixXd b = sample_mvn(s, 1000, 77);
  CHECK(a == b);
  CHECK(a != sample_mvn(s, 1000, 78));
}

TEST_CASE("eigenvalues_of_product examples") {
  const auto ev = eigenvalues_of_product(QuadraticForm(m2(1, 0, 0, -1)),
                                         CovarianceMatrix::validate(m2(1, 0.5, 0.5, 1)));
  CHECK(ev(0) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
  CHECK(ev(1) == doctest::Approx(-std::sqrt(0.75)).epsilon(1e-12));

  const Eigen::MatrixXd s1 = m2(1, 0.5, 0.5, 1);
  const auto tk = eigenvalues_of_product(QuadraticForm(oracle::tetrad_matrix()),
                                         CovarianceMatrix::validate(oracle::kron(s1, s1)));
  // Independent oracle: general eigensolve of the non-symmetric product.
  Eigen::EigenSolver<Eigen::MatrixXd> es(oracle::tetrad_matrix() * oracle::kron(s1, s1));
  std::vector<double> want;
  for (int i = 0; i < 4; ++i) want.push_back(es.eigenvalues()(i).real());
  std::sort(want.rbegin(), want.rend());
  for (int i = 0; i < 4; ++i) CHECK(tk(i) == doctest::Approx(want[i]).epsilon(1e-10));
  CHECK(tk(0) == doctest::Approx(0.375).epsilon(1e-10));
  CHECK(tk(0) == doctest::Approx(tk(1)).epsilon(1e-10));
  CHECK(tk(2) == doctest::Approx(-tk(0)).epsilon(1e-10));

  const auto id = eigenvalues_of_product(QuadraticForm(Eigen::MatrixXd::Identity(3, 3)),
                                         CovarianceMatrix::validate(Eigen::MatrixXd::Identity(3, 3)));
  CHECK((id.array() - 1).abs().maxCoeff() < 1e-14);
}

TEST_CASE("property: trace, determinant and similarity invariance") {
  auto& e = oracle::engine(22);
  for (int t = 0; t < 50; ++t) {
    const int k = 2 + t % 4;
    Eigen::MatrixXd a = oracle::random_matrix(k, k, e);
    a = (0.5 * (a + a.transpose())).eval();
    const Eigen::MatrixXd s = oracle::random_spd(k, e);
    const auto ev = eigenvalues_of_product(QuadraticForm(a), CovarianceMatrix::validate(s));
    const Eigen::MatrixXd as = a * s;
    CHECK(std::abs(ev.sum() - as.trace()) <= 1e-8 * std::max(1.0, ev.cwiseAbs().sum()));
    CHECK(std::abs(ev.prod() - as.determinant()) <= 1e-6 * std::abs(as.determinant()) + 1e-12);
    const Eigen::MatrixXd q = oracle::random_orthogonal(k, e);
    const Eigen::MatrixXd qa = q * a * q.transpose();
    const Eigen::MatrixXd qs = q * s * q.transpose();
    const auto ev2 = eigenvalues_of_product(QuadraticForm(0.5 * (qa + qa.transpose())),
                                            CovarianceMatrix::validate(0.5 * (qs + qs.transpose())));
    CHECK((ev - ev2).cwiseAbs().maxCoeff() < 1e-8 * std::max(1.0, ev.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("rank-deficient Sigma pads zero eigenvalues") {
  const auto ev = eigenvalues_of_product(QuadraticForm(Eigen::MatrixXd::Identity(2, 2)),
                                         CovarianceMatrix::validate(m2(1, 1, 1, 1)));
  CHECK(ev(0) == doctest::Approx(2).epsilon(1e-12));
  CHECK(std::abs(ev(1)) < 1e-12);
}
