#include "wald/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wald {

CovarianceMatrix CovarianceMatrix::validate(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("covariance matrix must be square and nonempty");
  }
  if (!m.allFinite()) throw std::invalid_argument("covariance matrix has non-finite entries");
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    throw std::invalid_argument("covariance matrix is not symmetric (max |s_ij - s_ji| = " +
                                std::to_string(asym) + ")");
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(m(i, i) > 0)) {
      throw std::invalid_argument("covariance matrix has a nonpositive diagonal entry at " +
                                  std::to_string(i + 1));
    }
  }
  CovarianceMatrix c;
  c.sigma_ = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.sigma_);
  // Eigen sorts ascending; store descending.
  const Eigen::Index k = m.rows();
  c.evals_ = es.eigenvalues().reverse();
  c.evecs_ = es.eigenvectors().rowwise().reverse();
  const double largest = c.evals_(0);
  const double smallest = c.evals_(k - 1);
  if (smallest < -1e-8 * largest) {
    throw std::invalid_argument("covariance matrix is not positive semidefinite (eigenvalue " +
                                std::to_string(smallest) + ")");
  }
  c.rank_ = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (c.evals_(i) >= 1e-10 * largest) ++c.rank_;
  }
  return c;
}

Eigen::MatrixXd factor(const CovarianceMatrix& sigma) {
  const Eigen::Index k = sigma.dimension();
  const Eigen::Index m = sigma.rank();
  Eigen::MatrixXd work = sigma.matrix();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(k, m);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  // Outer-product pivoted Cholesky on the residual matrix.
  for (Eigen::Index col = 0; col < m; ++col) {
    Eigen::Index piv = col;
    for (Eigen::Index i = col; i < k; ++i) {
      if (work(perm[i], perm[i]) > work(perm[piv], perm[piv])) piv = i;
    }
    std::swap(perm[col], perm[piv]);
    const Eigen::Index p = perm[col];
    const double d = work(p, p);
    if (!(d > 0)) break;
    const double root = std::sqrt(d);
    for (Eigen::Index i = col; i < k; ++i) l(perm[i], col) = work(perm[i], p) / root;
    for (Eigen::Index i = col; i < k; ++i) {
      for (Eigen::Index j = col; j < k; ++j) {
        work(perm[i], perm[j]) -= l(perm[i], col) * l(perm[j], col);
      }
    }
  }
  const double scale = sigma.matrix().cwiseAbs().maxCoeff();
  if ((l * l.transpose() - sigma.matrix()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    // Ill-conditioned pivots: fall back to the spectral square root.
    l = sigma.eigenvectors().leftCols(m) *
        sigma.eigenvalues().head(m).cwiseSqrt().asDiagonal();
  }
  return l;
}

Eigen::MatrixXd rank_reduction_basis(const CovarianceMatrix& sigma) {
  const Eigen::Index k = sigma.dimension();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(k);
  for (Eigen::Index i = 0; i < sigma.rank(); ++i) d(i) = std::sqrt(sigma.eigenvalues()(i));
  return sigma.eigenvectors() * d.asDiagonal();
}

MvnSampler::MvnSampler(const CovarianceMatrix& sigma) : b_(factor(sigma)) {}

MvnSampler MvnSampler::from_factor(Eigen::MatrixXd b) {
  if (b.rows() == 0 || b.cols() == 0 || !b.allFinite()) {
    throw std::invalid_argument("factor must be a finite nonempty matrix");
  }
  MvnSampler s;
  s.b_ = std::move(b);
  return s;
}

void MvnSampler::draw(Rng& rng, std::span<double> z, std::span<double> x) const {
  const Eigen::Index k = b_.rows();
  const Eigen::Index m = b_.cols();
  for (Eigen::Index j = 0; j < m; ++j) z[static_cast<std::size_t>(j)] = rng.normal();
  for (Eigen::Index i = 0; i < k; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) s += b_(i, j) * z[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s;
  }
}

Eigen::MatrixXd MvnSampler::sample(std::size_t n, std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("sample size must be at least 1");
  Rng rng(seed, 0);
  const auto k = static_cast<std::size_t>(b_.rows());
  std::vector<double> z(static_cast<std::size_t>(b_.cols()));
  std::vector<double> x(k);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), b_.rows());
  for (std::size_t r = 0; r < n; ++r) {
    draw(rng, z, x);
    for (std::size_t c = 0; c < k; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = x[c];
    }
  }
  return out;
}

Eigen::MatrixXd sample_mvn(const MvnSampler& s, std::size_t n, std::uint64_t seed) {
  return s.sample(n, seed);
}

Eigen::VectorXd eigenvalues_of_product(const QuadraticForm& a, const CovarianceMatrix& sigma) {
  if (a.dimension() != sigma.dimension()) {
    throw std::invalid_argument("eigenvalues_of_product: dimension mismatch");
  }
  const Eigen::MatrixXd b = factor(sigma);
  Eigen::MatrixXd m = b.transpose() * a.matrix() * b;
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.dimension());
  out.head(b.cols()) = es.eigenvalues();
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace wald
