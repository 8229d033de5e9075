#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wald/empirical.hpp"
#include "wald/gaussian.hpp"
#include "wald/limit_laws.hpp"
#include "wald/polynomial.hpp"

namespace wald {

/// Limit law of W_{f,Sigma} for a quadratic f = x^T A x, with stochastic
/// bounds.
struct QuadraticClassification {
  /// Eigenvalues of A Sigma, descending (k values, zeros included).
  std::vector<double> eigenvalues;
  /// Number of strictly positive / negative eigenvalues after dropping those
  /// below 1e-10 * max|lambda|.
  int positive = 0;
  int negative = 0;
  /// Exact law when one is known; empty means Monte Carlo only.
  std::optional<LimitLaw> law;
  /// Proven lower bound (1/4) chi^2_1, when it applies.
  std::optional<LimitLaw> lower_bound;
  /// Mixed-sign spectra without a proven bound carry (1/4) chi^2_1 as an
  /// open conjecture; never a guarantee.
  bool conjectured_lower = false;
  /// (1/4) chi^2_r with r the number of nonzero eigenvalues.
  LimitLaw upper_bound = ScaledChiSquare{0.25, 1};
  /// Short name of the rule that produced `law`.
  std::string rule;

  /// `law=<spec> eigenvalues=<csv> lower=<spec|none> upper=<spec>`
  std::string machine_line() const;
  /// Multi-line human-readable report ending with machine_line().
  std::string report() const;
};

/// Classifies (A, Sigma):
///   - 2x2 A with positive definite Sigma: b^2 - ac >= 0 gives (1/4) chi^2_1,
///     otherwise the two-term mixture (1/4)(Z1^2 + 4 det/tr^2 Z2^2) with
///     det, tr of A Sigma;
///   - otherwise, on the nonzero spectrum of A Sigma (r values): r = 1 gives
///     (1/4) chi^2_1, r = 2 follows the bivariate rule above, equal |lambda|
///     with both signs gives the folded-Beta product, equal lambda of one sign
///     gives (1/4) chi^2_r, anything else is Monte Carlo only.
/// Equality of |lambda| is judged with relative tolerance 1e-8.
QuadraticClassification classify(const QuadraticForm& a, const CovarianceMatrix& sigma);

/// Classification from a spectrum alone (the canonical diagonal form).
QuadraticClassification classify_spectrum(std::span<const double> eigenvalues);

/// Draws of (sum l_i Z_i^2)^2 / (4 sum l_i^2 Z_i^2).
///
/// With `check_bound`, every draw is compared against (1/4) sum Z_i^2 for the
/// same Z and a std::logic_error is thrown on violation.
EmpiricalDistribution sample_canonical(std::span<const double> lambdas, std::size_t n,
                                       std::uint64_t seed, unsigned threads = 1,
                                       bool check_bound = false);

/// Raw draws in batch order (unsorted); same stream layout as sample_canonical.
std::vector<double> draw_canonical(std::span<const double> lambdas, std::size_t n,
                                   std::uint64_t seed, unsigned threads = 1,
                                   bool check_bound = false);

/// Largest k with P((1/4) chi^2_k > c) <= max_exceedance, where c is the
/// (1 - alpha) quantile of chi^2_1. Requires 0 < alpha < 0.5.
int k_alpha(double alpha, double max_exceedance);

/// k_alpha(alpha, alpha).
int k_alpha(double alpha);

}  // namespace wald
