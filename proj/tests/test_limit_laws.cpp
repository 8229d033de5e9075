#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"
#include "wald/limit_laws.hpp"
#include "wald/wald_sampler.hpp"

using namespace wald;

TEST_CASE("F_sing closed form against an independent conditional integral") {
  CHECK(tetrad_singular_cdf(0) == 0);
  for (double t : {1e-4, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 12.0}) {
    CHECK(tetrad_singular_cdf(t) == doctest::Approx(oracle::r2u2_cdf(t)).epsilon(1e-9));
  }
}

TEST_CASE("F_sing at 0.5 against 10^7 Monte Carlo draws of (1/4) R^2 U^2") {
  std::mt19937_64 e(2024);
  std::chi_squared_distribution<double> chi4(4);
  std::uniform_real_distribution<double> u(0, 1);
  const int n = 10'000'000;
  int below = 0;
  for (int i = 0; i < n; ++i) {
    const double uu = u(e);
    below += 0.25 * chi4(e) * uu * uu <= 0.5;
  }
  CHECK(std::abs(double(below) / n - tetrad_singular_cdf(0.5)) < 0.001);
}

TEST_CASE("F_sing is a valid distribution function") {
  double prev = 0;
  for (int i = 0; i <= 1000; ++i) {
    const double v = tetrad_singular_cdf(20.0 * i / 1000);
    REQUIRE(v >= prev);
    prev = v;
  }
  CHECK(tetrad_singular_cdf(20) > 0.9999);
  for (double t : {0.01, 0.7, 1.0, 1.0000001, 3.0, 9.0}) {
    CHECK(tetrad_singular_cdf(t) + tetrad_singular_sf(t) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(tetrad_singular_sf(0) == 1);
  CHECK(tetrad_singular_cdf(-1) == 0);
}

TEST_CASE("cdf examples") {
  CHECK(cdf(TetradSingular{}, 0) == 0);
  const double c = oracle::chisq_quantile(1, 0.95);
  CHECK(cdf(ScaledChiSquare{0.25, 1}, c / 4) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(cdf(ScaledChiSquare{1, 3}, 2.0) == doctest::Approx(oracle::chisq_cdf(3, 2.0)).epsilon(1e-12));
}

TEST_CASE("two-term mixture: equal weights is the exponential, w2 = 0 is scaled chi^2_1") {
  for (double t : {0.01, 0.2, 1.0, 3.0}) {
    CHECK(cdf(TwoChiSquareMix{0.25, 0.25}, t) == doctest::Approx(1 - std::exp(-2 * t)).epsilon(1e-10));
    CHECK(std::abs(cdf(TwoChiSquareMix{0.7, 0}, t) - cdf(ScaledChiSquare{0.7, 1}, t)) < 1e-8);
  }
}

TEST_CASE("two-term mixture against a Simpson rule over z2") {
  const TwoChiSquareMix m{0.25, 0.07};
  for (double t : {0.05, 0.3, 1.2}) {
    const double zmax = std::sqrt(t / m.w2);
    const int panels = 20000;
    const double h = 2 * zmax / panels;
    auto g = [&](double z) {
      const double r = (t - m.w2 * z * z) / m.w1;
      return oracle::chisq_cdf(1, std::max(r, 0.0)) * std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
    };
    double s = g(-zmax) + g(zmax);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4 : 2) * g(-zmax + i * h);
    CHECK(cdf(m, t) == doctest::Approx(s * h / 3).epsilon(1e-7));
  }
}

TEST_CASE("folded-Beta closed-form identities") {
  for (double t : {0.05, 0.4, 1.5, 4.0}) {
    CHECK(cdf(FoldedBetaProduct{2, 2}, t) == doctest::Approx(tetrad_singular_cdf(t)).epsilon(1e-9));
    CHECK(cdf(FoldedBetaProduct{1, 1}, t) == doctest::Approx(oracle::chisq_cdf(1, 4 * t)).epsilon(1e-9));
    CHECK(cdf(FoldedBetaProduct{1, 3}, t) == doctest::Approx(cdf(FoldedBetaProduct{3, 1}, t)).epsilon(1e-10));
  }
}

TEST_CASE("quantile examples and round trip on every branch") {
  CHECK(quantile(ScaledChiSquare{1, 1}, 0.95) == doctest::Approx(3.8414588206941).epsilon(1e-10));
  const LimitLaw laws[] = {ScaledChiSquare{0.25, 3}, TwoChiSquareMix{0.25, 0.1}, TetradSingular{},
                           FoldedBetaProduct{1, 2}};
  for (const auto& law : laws) {
    for (int i = 1; i <= 99; i += 7) {
      const double p = i / 100.0;
      CHECK(cdf(law, quantile(law, p)) == doctest::Approx(p).epsilon(1e-8));
    }
  }
  CHECK_THROWS_AS(quantile(TetradSingular{}, 0), std::domain_error);
  CHECK_THROWS_AS(quantile(TetradSingular{}, 1), std::domain_error);
}

TEST_CASE("F_sing 0.95 quantile against 10^7 draws") {
  const double q = quantile(TetradSingular{}, 0.95);
  CHECK(tetrad_singular_cdf(q) == doctest::Approx(0.95).epsilon(1e-10));
  const auto s = sample_law(TetradSingular{}, 10'000'000, 31);
  CHECK(std::abs(s.quantile(0.95) - q) < 0.01);
}

TEST_CASE("sample_law means") {
  CHECK(std::abs(sample_law(ScaledChiSquare{0.25, 1}, 1'000'000, 1).mean() - 0.25) < 0.005);
  CHECK(std::abs(sample_law(TetradSingular{}, 1'000'000, 2).mean() - 1.0 / 3) < 0.01);
  // B ~ Beta(a, a) has E[(2B-1)^2] = 1/(2a+1); with k1 = k2 = 3 the mean is (6/4)(1/4).
  CHECK(std::abs(sample_law(FoldedBetaProduct{3, 3}, 1'000'000, 3).mean() - 0.375) < 0.01);
}

TEST_CASE("sample_law KS against the closed forms") {
  CHECK(ks_distance(sample_law(FoldedBetaProduct{2, 2}, 1'000'000, 4), LimitLaw{TetradSingular{}}) < 0.003);
  CHECK(ks_distance(sample_law(TwoChiSquareMix{0.25, 0.05}, 1'000'000, 5),
                    LimitLaw{TwoChiSquareMix{0.25, 0.05}}) < 0.003);
  const double d = ks_two_sample(sample_law(FoldedBetaProduct{1, 3}, 1'000'000, 6),
                                 sample_law(FoldedBetaProduct{3, 1}, 1'000'000, 7));
  CHECK(d < 0.003);
  CHECK(ks_two_sample(sample_law(FoldedBetaProduct{2, 2}, 1'000'000, 8),
                      sample_law(TetradSingular{}, 1'000'000, 9)) < 0.003);
}

TEST_CASE("sample_law does not depend on the thread count") {
  const auto a = sample_law(TetradSingular{}, 200'000, 10, 1);
  const auto b = sample_law(TetradSingular{}, 200'000, 10, 3);
  CHECK(a.values() == b.values());
}

TEST_CASE("monomial_law examples") {
  CHECK(std::get<ScaledChiSquare>(monomial_law(MonomialForm({1, 1}))) == ScaledChiSquare{0.25, 1});
  CHECK(std::get<ScaledChiSquare>(monomial_law(MonomialForm({2, 3}))) == ScaledChiSquare{1.0 / 25, 1});
  CHECK(std::get<ScaledChiSquare>(monomial_law(MonomialForm({1, 1, 1}))) == ScaledChiSquare{1.0 / 9, 1});
}

TEST_CASE("stable density examples and law check") {
  CHECK(stable_density(1, 1) == doctest::Approx(std::exp(-0.5) / std::sqrt(2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(stable_density(2, 4) ==
        doctest::Approx(2 / std::sqrt(2 * std::numbers::pi) / 8 * std::exp(-0.5)).epsilon(1e-14));
  std::mt19937_64 e(3);
  std::normal_distribution<double> z;
  std::vector<double> v(1'000'000);
  for (auto& x : v) {
    const double zz = z(e);
    x = 2.25 / (zz * zz);
  }
  CHECK(ks_distance(EmpiricalDistribution(v), [](double t) { return stable_cdf(1.5, t); }) < 0.003);
  // Density integrates to the cdf.
  CHECK(stable_cdf(1, 2) == doctest::Approx(2 * (1 - oracle::normal_cdf(1 / std::sqrt(2.0)))).epsilon(1e-14));
}

TEST_CASE("law specs round trip and reject junk") {
  for (const char* s : {"scaled-chisq:0.25:1", "mix2:0.25:0.0625", "tetrad", "beta-fold:2:2"}) {
    CHECK(law_spec(parse_law(s)) == s);
  }
  CHECK(std::get<ScaledChiSquare>(parse_law("chisq:3")) == ScaledChiSquare{1, 3});
  for (const char* s : {"", "gauss", "scaled-chisq:0:1", "scaled-chisq:1", "beta-fold:0:2", "mix2:a:1",
                        "tetrad:1", "beta-fold:1.5:2"}) {
    CHECK_THROWS_AS(parse_law(s), std::invalid_argument);
  }
}
