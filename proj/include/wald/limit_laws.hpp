#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "wald/empirical.hpp"
#include "wald/polynomial.hpp"

namespace wald {

/// scale * chi^2_df.
struct ScaledChiSquare {
  double scale = 1.0;
  int df = 1;
  friend bool operator==(const ScaledChiSquare&, const ScaledChiSquare&) = default;
};

/// w1 * Z1^2 + w2 * Z2^2 with independent standard normals.
struct TwoChiSquareMix {
  double w1 = 1.0;
  double w2 = 0.0;
  friend bool operator==(const TwoChiSquareMix&, const TwoChiSquareMix&) = default;
};

/// (1/4) R^2 U^2 with R^2 ~ chi^2_4 independent of U ~ Uniform[0, 1]: the
/// tetrad Wald limit at block-diagonal covariance matrices.
struct TetradSingular {
  friend bool operator==(const TetradSingular&, const TetradSingular&) = default;
};

/// (1/4) R^2 (2B - 1)^2 with R^2 ~ chi^2_{k1+k2} independent of
/// B ~ Beta(k1/2, k2/2).
struct FoldedBetaProduct {
  int k1 = 1;
  int k2 = 1;
  friend bool operator==(const FoldedBetaProduct&, const FoldedBetaProduct&) = default;
};

/// A law known only through a Monte Carlo sample.
struct Empirical {
  std::shared_ptr<const EmpiricalDistribution> samples;
  friend bool operator==(const Empirical& a, const Empirical& b) { return a.samples == b.samples; }
};

using LimitLaw =
    std::variant<ScaledChiSquare, TwoChiSquareMix, TetradSingular, FoldedBetaProduct, Empirical>;

/// Throws std::invalid_argument when parameters are out of range.
void validate(const LimitLaw& law);

/// Distribution function. 0 for t <= 0.
double cdf(const LimitLaw& law, double t);

/// Inverse of cdf for p in (0, 1), by bracketed root finding. The bracket
/// starts at [0, 50 * nominal scale] and doubles until it contains p.
double quantile(const LimitLaw& law, double p);

/// n i.i.d. draws, deterministic in (seed, n); independent of `threads`.
EmpiricalDistribution sample_law(const LimitLaw& law, std::size_t n, std::uint64_t seed,
                                 unsigned threads = 1);

/// The monomial limit chi^2_1 / (a_1 + ... + a_k)^2.
LimitLaw monomial_law(const MonomialForm& m);

/// Closed-form distribution function of (1/4) R^2 U^2:
/// 1 - exp(-2t) + sqrt(2 pi t) (1 - Phi(2 sqrt(t))).
double tetrad_singular_cdf(double t);

/// 1 - F_sing(t) = exp(-2t) - sqrt(2 pi t) (1 - Phi(2 sqrt(t))), without
/// the subtraction from one.
double tetrad_singular_sf(double t);

/// Density of alpha^2 / Z^2 (one-sided stable law of index 1/2):
/// alpha / sqrt(2 pi) * x^{-3/2} * exp(-alpha^2 / (2x)).
double stable_density(double alpha, double x);

/// Distribution function of alpha^2 / Z^2: 2 (1 - Phi(alpha / sqrt(x))).
double stable_cdf(double alpha, double x);

/// Standard Cauchy distribution function 1/2 + arctan(t) / pi.
double cauchy_cdf(double t);

/// Distribution function of 1 / chi^2_1: 2 (1 - Phi(1 / sqrt(t))).
double inverse_chisq1_cdf(double t);

/// Text form used by the CLI: `scaled-chisq:<scale>:<df>`, `mix2:<w1>:<w2>`,
/// `tetrad`, `beta-fold:<k1>:<k2>`, `empirical`.
std::string law_spec(const LimitLaw& law);

/// Parses the text form (all but `empirical`). Throws std::invalid_argument.
LimitLaw parse_law(std::string_view spec);

}  // namespace wald
