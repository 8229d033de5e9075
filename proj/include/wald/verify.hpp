#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wald/gaussian.hpp"
#include "wald/limit_laws.hpp"
#include "wald/polynomial.hpp"

namespace wald {

enum class Tier { theorem, conjecture };

const char* tier_name(Tier t);

/// Outcome of one numerical check. pass <=> statistic <= threshold.
///
/// Checks that must show a difference (a law that should NOT match) report
/// statistic = -distance against threshold = -bound.
struct VerificationResult {
  std::string name;
  Tier tier = Tier::theorem;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t n_used = 0;
  std::uint64_t seed = 0;
};

VerificationResult make_result(std::string name, Tier tier, double statistic, double threshold,
                               std::size_t n, std::uint64_t seed);

/// Bivariate monomial: KS of sample_wald against monomial_law(m).
VerificationResult verify_monomial_theorem(const MonomialForm& m, const CovarianceMatrix& sigma,
                                           std::size_t n, std::uint64_t seed, unsigned threads = 1);

/// Any k: KS against (1/(sum alpha)^2) chi^2_1. Tier is conjecture for k >= 3
/// with non-diagonal Sigma. Threshold 0.003 for theorem tier, 0.005 otherwise.
VerificationResult verify_conjecture_monomial(const MonomialForm& m, const CovarianceMatrix& sigma,
                                              std::size_t n, std::uint64_t seed,
                                              unsigned threads = 1);

/// Draws of sum p_i Y_i / X_i with X, Y iid N(0, Sigma); KS against the
/// standard Cauchy. Requires p >= 0 summing to 1.
VerificationResult verify_cauchy(std::span<const double> p, const CovarianceMatrix& sigma,
                                 std::size_t n, std::uint64_t seed, unsigned threads = 1);

/// Draws of (p/X)^T Sigma (p/X); KS against the law of 1/chi^2_1.
VerificationResult verify_reciprocal(std::span<const double> p, const CovarianceMatrix& sigma,
                                     std::size_t n, std::uint64_t seed, unsigned threads = 1);

/// Draws of Q = 4 / (1/X1^2 - 2 rho/(X1 X2) + 1/X2^2), unit variances and
/// correlation rho. Statistic |mean/expected - 1| with expected
/// (1 + 2 rho^2)/(1 - rho^2), threshold 0.02.
VerificationResult counterexample_negative_weights(double rho, std::size_t n, std::uint64_t seed,
                                                   unsigned threads = 1);

/// The same Q must NOT follow chi^2_1: statistic -KS, threshold -0.01.
VerificationResult counterexample_law_differs(double rho, std::size_t n, std::uint64_t seed,
                                              unsigned threads = 1);

/// Raw draws of Q (batch order).
std::vector<double> draw_counterexample_q(double rho, std::size_t n, std::uint64_t seed,
                                          unsigned threads = 1);

/// t(psi, phi) for parameter sigma.
double moment_t(double psi, double phi, double sigma);

/// t(psi, phi) rewritten without cancellation:
/// numerator 8 sin^2((psi+phi)/2) cos^2((psi-phi)/2), denominator
/// 4 sigma^2 cos^4(phi)/(A+R) + 2R cos^2((psi-psi0)/2) where A + R cos(psi - psi0)
/// is the displayed denominator. Used by the quadrature.
double moment_t_factored(double psi, double phi, double sigma);

/// 1/T' computed directly from X1 = cos(Psi - phi/2), X2 = sin(Psi + phi/2).
double moment_t_prime_inverse(double psi_big, double phi, double sigma);

struct MomentTable {
  double sigma = 1.0;
  std::vector<double> phis;
  std::vector<int> ms;
  /// moments[a][b] = E[T^ms[a]] at phis[b].
  std::vector<std::vector<double>> moments;
  /// max over m of max_phi |E[T^m](phi) - E[T^m](phis[0])|.
  double max_deviation = 0.0;
};

/// E[T^m] = (1/2pi) int_0^{2pi} t(psi, phi)^m dpsi by adaptive quadrature
/// (absolute tolerance 1e-10). Requires 0 <= phi < pi/2 and sigma > 0.
MomentTable moment_invariance_check(double sigma, std::span<const double> phis,
                                    std::span<const int> ms);

/// Moment constancy as a result: statistic max_deviation, threshold 1e-8.
VerificationResult verify_moment_invariance(double sigma, std::span<const double> phis,
                                            std::span<const int> ms);

/// Doubled-angle cross-check: max |T'_direct - (sigma^2/4) t(2 Psi, phi)| /
/// (1 + |T'|) over uniform Psi draws (threshold 1e-8).
VerificationResult verify_doubled_angle(double sigma, double phi, std::size_t n,
                                        std::uint64_t seed);

/// Mean of the sampled W for f = x1 x2^(1/sigma), correlation sin(phi),
/// against (sigma^2/2) E[T] from quadrature; relative error, threshold 0.01.
VerificationResult verify_moment_sampler(double sigma, double phi, std::size_t n,
                                         std::uint64_t seed, unsigned threads = 1);

/// S_c(Psi) = (1+c)^2 cos^2 sin^2 / (cos^2 + c^2 sin^2) against cos^2(Psi),
/// two-sample KS. For c >= 0 the threshold is 0.003; for c < 0 the result
/// asserts a difference (statistic -KS, threshold -0.01).
VerificationResult verify_trig_lemma(double c, std::size_t n, std::uint64_t seed,
                                     unsigned threads = 1);

/// Canonical (k1 ones, k2 minus ones) against sample_law(FoldedBetaProduct),
/// two-sample KS, threshold 0.003.
VerificationResult verify_beta_representation(int k1, int k2, std::size_t n, std::uint64_t seed,
                                              unsigned threads = 1);

/// Dominance runs: upper (1/4) chi^2_k for 20 random spectra, lower
/// (1/4) chi^2_1 for nonnegative and +-1 spectra, the equality case
/// lambda = (1,1,1), and F_sing >= F_{chi^2_1} in closed form on [0, 50].
std::vector<VerificationResult> verify_bounds_suite(std::size_t n, std::uint64_t seed,
                                                    unsigned threads = 1);

/// T statistics of the tetrad (0,1,2,3) for `replicates` datasets of size
/// n_data drawn from N(0, theta). Replicate r uses stream r.
std::vector<double> tetrad_replicates(const Eigen::MatrixXd& theta, std::size_t n_data,
                                      std::size_t replicates, std::uint64_t seed,
                                      unsigned threads = 1);

/// Two-sample KS of tetrad_replicates against 10^6 draws of the limit:
/// TetradSingular when the tetrad gradient vanishes at theta, chi^2_1
/// otherwise. Threshold 0.03.
VerificationResult verify_prop1_convergence(const Eigen::MatrixXd& theta, std::size_t n_data,
                                            std::size_t replicates, std::uint64_t seed,
                                            unsigned threads = 1);

/// alpha^2/Z1^2 + beta^2/Z2^2 against (alpha + beta)^2/Z^2, two-sample KS,
/// threshold 0.003.
VerificationResult verify_stable_convolution(double alpha, double beta, std::size_t n,
                                             std::uint64_t seed, unsigned threads = 1);

/// Pathwise: draws for c f and f from one seed; max relative difference.
/// Threshold 0 (bitwise identical) when |c| is a power of two, else 1e-8.
VerificationResult verify_scale_invariance(const HomogeneousPolynomial& f,
                                           const CovarianceMatrix& sigma, double c,
                                           std::size_t n, std::uint64_t seed);

/// Pathwise: W_{f o B, B^-1 Sigma B^-T}(B^-1 X) against W_{f,Sigma}(X) for the
/// same X; max relative difference, threshold 1e-8.
VerificationResult verify_linear_invariance(const HomogeneousPolynomial& f,
                                            const CovarianceMatrix& sigma,
                                            const Eigen::MatrixXd& b, std::size_t n,
                                            std::uint64_t seed);

/// KS of sample_wald(A, Sigma) against the law emitted by classify; the
/// result fails if classify reports no closed form. Threshold 0.003.
VerificationResult verify_quadratic_law(const QuadraticForm& a, const CovarianceMatrix& sigma,
                                        std::size_t n, std::uint64_t seed, unsigned threads = 1);

/// Random positive definite k x k matrix with unit diagonal.
Eigen::MatrixXd random_correlation(int k, std::uint64_t seed);

enum class Suite { all, theorems, conjectures };

Suite parse_suite(std::string_view s);

/// Per-check seed: splitmix64 of (seed xor fnv1a(name)).
std::uint64_t check_seed(std::uint64_t seed, std::string_view name);

/// Runs the suite; checks run concurrently on `threads` workers, each check
/// single-threaded. The result is sorted by name and independent of
/// `threads`.
std::vector<VerificationResult> run_suite(Suite suite, std::size_t n, std::uint64_t seed,
                                          unsigned threads = 1);

/// Names of every check in the full suite, sorted. Grouped checks contribute
/// the name prefixes of the results they emit.
std::vector<std::string> suite_check_names();

struct CoverageItem {
  std::string topic;
  /// Name prefixes of the checks that cover the topic.
  std::vector<std::string> checks;
};

/// Topics the suite is required to cover, each mapped to its checks.
const std::vector<CoverageItem>& coverage_manifest();

/// Header line plus one TSV line per result:
/// name tier statistic threshold pass n seed.
std::string format_report(const std::vector<VerificationResult>& results);

/// True when every theorem-tier result passes.
bool theorems_pass(const std::vector<VerificationResult>& results);

}  // namespace wald
