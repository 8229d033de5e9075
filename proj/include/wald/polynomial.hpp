#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wald {

/// One term `coeff * x_1^e_1 * ... * x_k^e_k` of a polynomial.
struct Term {
  double coeff = 0.0;
  std::vector<int> exponents;

  friend bool operator==(const Term&, const Term&) = default;
};

class QuadraticForm;

/// A nonzero homogeneous polynomial with integer exponents.
///
/// Terms are canonicalized on construction: equal exponent vectors are merged,
/// zero coefficients are dropped, and the survivors are sorted in descending
/// lexicographic order of their exponent vectors (so x1^2 precedes x1*x2).
/// Instances are immutable.
class HomogeneousPolynomial {
 public:
  /// Throws std::invalid_argument on an empty/zero polynomial, negative
  /// exponents, mixed exponent-vector lengths, or inhomogeneous degrees.
  explicit HomogeneousPolynomial(std::vector<Term> terms);

  std::size_t dimension() const noexcept { return dimension_; }
  int degree() const noexcept { return degree_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  double eval(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

  /// Evaluates f and its gradient in one pass; `grad` must have length k.
  double eval_with_gradient(std::span<const double> x, std::span<double> grad) const;

  /// c * f. Throws std::invalid_argument for c == 0.
  HomogeneousPolynomial scale(double c) const;

  /// The expanded polynomial x -> f(B x).
  ///
  /// Rejects B with |det B| < 1e-12 * ||B||_2^k.
  HomogeneousPolynomial compose_linear(const Eigen::MatrixXd& b) const;

  /// Substitutes x_{m+1} = ... = x_k = 0 and drops those variables.
  /// Throws std::domain_error if nothing survives.
  HomogeneousPolynomial restrict_leading(std::size_t m) const;

  friend bool operator==(const HomogeneousPolynomial&, const HomogeneousPolynomial&) = default;

 private:
  std::vector<Term> terms_;
  std::size_t dimension_ = 0;
  int degree_ = 0;
};

/// x_1^a_1 * ... * x_k^a_k with strictly positive real exponents.
///
/// Evaluated on absolute values, |x_1|^a_1 ... |x_k|^a_k, so the function is
/// defined for every x with nonzero coordinates; W_{f,Sigma} only depends on
/// f^2 and the direction of its gradient, so this convention does not change
/// the Wald variable.
class MonomialForm {
 public:
  explicit MonomialForm(std::vector<double> exponents);

  std::size_t dimension() const noexcept { return exponents_.size(); }
  const std::vector<double>& exponents() const noexcept { return exponents_; }
  double total_degree() const noexcept;

  double eval(std::span<const double> x) const;
  std::vector<double> gradient(std::span<const double> x) const;

 private:
  std::vector<double> exponents_;
};

/// Symmetric matrix A of the quadratic form x^T A x. Built from the upper
/// triangle so that A = A^T holds exactly.
class QuadraticForm {
 public:
  /// Uses only the upper triangle of `a`. Throws on non-square or zero input.
  explicit QuadraticForm(const Eigen::MatrixXd& a);

  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  Eigen::Index dimension() const noexcept { return a_.rows(); }

  HomogeneousPolynomial to_polynomial() const;

 private:
  Eigen::MatrixXd a_;
};

/// Maps a degree-2 polynomial to its symmetric matrix: a_ii = coeff(x_i^2),
/// a_ij = coeff(x_i x_j) / 2. Throws std::invalid_argument if degree != 2.
QuadraticForm quadratic_to_matrix(const HomogeneousPolynomial& f);

/// The tetrad x1*x4 - x2*x3.
HomogeneousPolynomial tetrad_polynomial();

/// Parses the polynomial text format: one term per line, `coeff e1 ... ek`,
/// `#` starts a comment. Errors carry the offending line number.
HomogeneousPolynomial parse_polynomial(const std::string& text);
HomogeneousPolynomial read_polynomial_file(const std::string& path);
std::string format_polynomial(const HomogeneousPolynomial& f);

}  // namespace wald
