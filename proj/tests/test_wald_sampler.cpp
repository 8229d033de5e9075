#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.hpp"
#include "wald/gaussian.hpp"
#include "wald/limit_laws.hpp"
#include "wald/wald_sampler.hpp"

using namespace wald;

namespace {

Eigen::MatrixXd corr2(double rho) {
  Eigen::MatrixXd m(2, 2);
  m << 1, rho, rho, 1;
  return m;
}

WaldSampleConfig cfg(std::size_t n, std::uint64_t seed, unsigned threads = 1) {
  WaldSampleConfig c;
  c.n = n;
  c.seed = seed;
  c.threads = threads;
  return c;
}

const HomogeneousPolynomial kX1X2({{1, {1, 1}}});

}  // namespace

TEST_CASE("linear f gives chi^2_1 for any Sigma") {
  const HomogeneousPolynomial f({{2.0, {1, 0, 0}}, {-1.0, {0, 1, 0}}, {0.5, {0, 0, 1}}});
  std::mt19937_64 e(1);
  const auto s = CovarianceMatrix::validate(oracle::random_spd(3, e));
  const auto w = sample_wald(f, s, cfg(1'000'000, 11));
  CHECK(ks_distance(w, LimitLaw{ScaledChiSquare{1, 1}}) < 0.003);
}

TEST_CASE("x1 x2 with correlation 0.7 follows (1/4) chi^2_1") {
  const auto w = sample_wald(kX1X2, CovarianceMatrix::validate(corr2(0.7)), cfg(1'000'000, 12));
  CHECK(ks_distance(w, LimitLaw{ScaledChiSquare{0.25, 1}}) < 0.003);
}

TEST_CASE("single variable powers: W = X^2 / alpha^2 exactly") {
  Eigen::MatrixXd s(1, 1);
  s << 3.0;
  const auto sig = CovarianceMatrix::validate(s);
  const HomogeneousPolynomial cube(std::vector<Term>{{1.0, {3}}});
  const auto w = sample_wald(cube, sig, cfg(1'000'000, 13));
  CHECK(ks_distance(w, LimitLaw{ScaledChiSquare{1.0 / 9, 1}}) < 0.003);
  const auto m = sample_wald(MonomialForm({2.5}), sig, cfg(1'000'000, 14));
  CHECK(ks_distance(m, LimitLaw{ScaledChiSquare{1 / 6.25, 1}}) < 0.003);
}

TEST_CASE("rank-1 Sigma is reduced to one variable") {
  const auto sig = CovarianceMatrix::validate(corr2(1.0));
  const auto w = sample_wald(kX1X2, sig, cfg(1'000'000, 15));
  CHECK(ks_distance(w, LimitLaw{ScaledChiSquare{0.25, 1}}) < 0.003);
  const auto m = sample_wald(MonomialForm({2, 3}), sig, cfg(1'000'000, 16));
  CHECK(ks_distance(m, LimitLaw{ScaledChiSquare{1.0 / 25, 1}}) < 0.003);
}

TEST_CASE("real-exponent monomial (2, 3) with rho = -0.6") {
  const auto m = sample_wald(MonomialForm({2, 3}), CovarianceMatrix::validate(corr2(-0.6)), cfg(1'000'000, 17));
  CHECK(ks_distance(m, LimitLaw{ScaledChiSquare{1.0 / 25, 1}}) < 0.003);
}

TEST_CASE("ks_distance examples") {
  const int n = 1000;
  std::vector<double> exact;
  for (int i = 1; i <= n; ++i) exact.push_back(oracle::chisq_quantile(1, (i - 0.5) / n));
  CHECK(ks_distance(EmpiricalDistribution(exact), LimitLaw{ScaledChiSquare{1, 1}}) <= 0.5 / n + 1e-12);

  const auto own = sample_law(ScaledChiSquare{1, 1}, 1'000'000, 18);
  CHECK(ks_distance(own, LimitLaw{ScaledChiSquare{1, 1}}) < 1.95 / 1000.0);

  const auto two = sample_law(ScaledChiSquare{1, 2}, 100'000, 19);
  CHECK(ks_distance(two, LimitLaw{ScaledChiSquare{1, 1}}) > 0.15);
}

TEST_CASE("property: ks_distance equals the brute-force supremum") {
  auto& e = oracle::engine(71);
  std::normal_distribution<double> z;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + static_cast<std::size_t>(e() % 5000);
    const double shift = 0.3 * z(e);
    std::vector<double> v(n);
    for (double& x : v) x = z(e) + shift;
    if (rep % 4 == 0) v.resize(n / 2 + 1, v[0]);  // ties
    const EmpiricalDistribution emp(v);
    const auto& xs = emp.values();
    double brute = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double f = oracle::normal_cdf(xs[i]);
      brute = std::max({brute, (i + 1.0) / xs.size() - f, f - double(i) / xs.size()});
    }
    CHECK(ks_distance(emp, [](double t) { return oracle::normal_cdf(t); }) == brute);
  }
}

TEST_CASE("dominance_check examples") {
  const auto grid = linear_grid(0, 10, 501);
  CHECK(dominance_check(LimitLaw{ScaledChiSquare{0.25, 1}}, LimitLaw{TetradSingular{}}, grid, 1e-9).pass);
  CHECK(dominance_check(LimitLaw{TetradSingular{}}, LimitLaw{ScaledChiSquare{1, 1}}, grid, 1e-9).pass);
  const auto same = dominance_check(LimitLaw{ScaledChiSquare{1, 1}}, LimitLaw{ScaledChiSquare{1, 1}}, grid, 0);
  CHECK(same.pass);
  CHECK(same.worst_gap == 0);
  CHECK(same.grid_points == 501);
  // Reversed order must fail.
  CHECK_FALSE(dominance_check(LimitLaw{ScaledChiSquare{1, 1}}, LimitLaw{TetradSingular{}}, grid, 1e-9).pass);
}

TEST_CASE("linear_grid includes both ends") {
  const auto g = linear_grid(1, 2, 11);
  CHECK(g.size() == 11);
  CHECK(g.front() == 1);
  CHECK(g.back() == 2);
}

TEST_CASE("property: scaling f leaves draws bitwise unchanged for power-of-two c") {
  const auto sig = CovarianceMatrix::validate(corr2(0.3));
  const HomogeneousPolynomial f({{1, {3, 0}}, {-2, {1, 2}}});
  const auto a = draw_wald(f, sig, cfg(50'000, 20));
  for (double c : {2.0, -0.25, 1024.0}) CHECK(draw_wald(f.scale(c), sig, cfg(50'000, 20)) == a);
  const auto b = draw_wald(f.scale(2.5), sig, cfg(50'000, 20));
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / a[i]);
  CHECK(worst < 1e-8);
}

TEST_CASE("property: coupled linear change of variables gives the same draws") {
  std::mt19937_64 e(21);
  for (int t = 0; t < 5; ++t) {
    const int k = 2 + t % 3;
    const Eigen::MatrixXd s = oracle::random_spd(k, e);
    const auto sig = CovarianceMatrix::validate(s);
    const HomogeneousPolynomial f = k == 2 ? kX1X2 : HomogeneousPolynomial({{1, std::vector<int>(k, 1)}});
    const Eigen::MatrixXd b = oracle::random_matrix(k, k, e) + 3 * Eigen::MatrixXd::Identity(k, k);
    const Eigen::MatrixXd binv = b.inverse();
    const Eigen::MatrixXd l = factor(sig);
    const auto x = draw_wald_coupled(f, MvnSampler::from_factor(l), s, cfg(20'000, 22));
    const Eigen::MatrixXd s2 = binv * s * binv.transpose();
    const auto y = draw_wald_coupled(f.compose_linear(b), MvnSampler::from_factor(binv * l),
                                     0.5 * (s2 + s2.transpose()), cfg(20'000, 22));
    double worst = 0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]) / x[i]);
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("draws do not depend on thread count or batch completion order") {
  const auto sig = CovarianceMatrix::validate(corr2(0.5));
  const auto a = draw_wald(kX1X2, sig, cfg(300'000, 23, 1));
  const auto b = draw_wald(kX1X2, sig, cfg(300'000, 23, 4));
  CHECK(a == b);
  const auto m1 = draw_wald(MonomialForm({1, 2}), sig, cfg(300'000, 24, 1));
  const auto m2 = draw_wald(MonomialForm({1, 2}), sig, cfg(300'000, 24, 3));
  CHECK(m1 == m2);
  CHECK(sample_wald(kX1X2, sig, cfg(300'000, 23, 2)).values() == EmpiricalDistribution(a).values());
}

TEST_CASE("draws are positive and finite") {
  const auto sig = CovarianceMatrix::validate(corr2(-0.9));
  for (double v : draw_wald(HomogeneousPolynomial({{1, {2, 1}}, {1, {0, 3}}}), sig, cfg(100'000, 25))) {
    REQUIRE(std::isfinite(v));
    REQUIRE(v >= 0);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  CHECK_THROWS(draw_wald(tetrad_polynomial(), CovarianceMatrix::validate(corr2(0)), cfg(10, 1)));
  CHECK_THROWS(draw_wald(MonomialForm({1, 1, 1}), CovarianceMatrix::validate(corr2(0)), cfg(10, 1)));
}
