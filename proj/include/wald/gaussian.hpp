#pragma once

#include <cstdint>
#include <span>

#include <Eigen/Dense>

#include "wald/polynomial.hpp"
#include "wald/rng.hpp"

namespace wald {

/// A validated covariance matrix: symmetric, positive semidefinite up to
/// tolerance, with strictly positive diagonal.
///
/// Tolerances: asymmetry |s_ij - s_ji| <= 1e-10 (then symmetrized exactly),
/// smallest eigenvalue >= -1e-8 * largest, and eigenvalues below
/// 1e-10 * largest count as zero when detecting the rank.
class CovarianceMatrix {
 public:
  static CovarianceMatrix validate(const Eigen::MatrixXd& m);

  const Eigen::MatrixXd& matrix() const noexcept { return sigma_; }
  Eigen::Index dimension() const noexcept { return sigma_.rows(); }
  Eigen::Index rank() const noexcept { return rank_; }
  bool full_rank() const noexcept { return rank_ == sigma_.rows(); }

  /// Eigenvalues in descending order, with matching eigenvector columns.
  const Eigen::VectorXd& eigenvalues() const noexcept { return evals_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return evecs_; }

 private:
  CovarianceMatrix() = default;
  Eigen::MatrixXd sigma_;
  Eigen::VectorXd evals_;
  Eigen::MatrixXd evecs_;
  Eigen::Index rank_ = 0;
};

/// k x m square-root factor B (m = rank) with B B^T = Sigma, from a
/// diagonally pivoted Cholesky factorization truncated at the rank.
Eigen::MatrixXd factor(const CovarianceMatrix& sigma);

/// Invertible k x k matrix B with Sigma = B E_m B^T, E_m = diag(1,..,1,0,..,0)
/// with m = rank(Sigma) leading ones. Built from the eigendecomposition.
Eigen::MatrixXd rank_reduction_basis(const CovarianceMatrix& sigma);

/// Draws N(0, Sigma) vectors as X = B Z with Z standard normal.
class MvnSampler {
 public:
  explicit MvnSampler(const CovarianceMatrix& sigma);

  /// Uses the given k x m factor as is; Sigma is implied as B B^T.
  static MvnSampler from_factor(Eigen::MatrixXd b);

  const Eigen::MatrixXd& factor_b() const noexcept { return b_; }
  Eigen::Index dimension() const noexcept { return b_.rows(); }
  Eigen::Index latent_dimension() const noexcept { return b_.cols(); }

  /// One draw into `x` (length k), consuming m normals; `z` is scratch of
  /// length m.
  void draw(Rng& rng, std::span<double> z, std::span<double> x) const;

  /// n x k matrix of draws from stream (seed, 0). Deterministic in (seed, n).
  Eigen::MatrixXd sample(std::size_t n, std::uint64_t seed) const;

 private:
  MvnSampler() = default;
  Eigen::MatrixXd b_;
};

Eigen::MatrixXd sample_mvn(const MvnSampler& s, std::size_t n, std::uint64_t seed);

/// Eigenvalues of A Sigma, computed as the eigenvalues of the symmetric
/// matrix B^T A B with B the square-root factor of Sigma. Zero eigenvalues
/// from a rank-deficient Sigma are padded back so that k values are
/// returned, sorted in descending order.
Eigen::VectorXd eigenvalues_of_product(const QuadraticForm& a, const CovarianceMatrix& sigma);

}  // namespace wald
