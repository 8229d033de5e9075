#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace wald {

/// n x p observations (rows) with optional column names. Requires p >= 4,
/// n >= p + 1 and finite entries.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd values, std::vector<std::string> names = {});

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  Eigen::Index rows() const noexcept { return values_.rows(); }
  Eigen::Index cols() const noexcept { return values_.cols(); }

 private:
  Eigen::MatrixXd values_;
  std::vector<std::string> names_;
};

/// Reads comma-separated data; a first row that does not parse as numbers is
/// taken as the header. Errors carry line numbers.
DataMatrix read_csv(const std::string& path);
DataMatrix parse_csv(const std::string& text);

/// Zero-based indices (i, j, k, l) of the tetrad
/// theta_ik * theta_jl - theta_il * theta_jk.
struct TetradIndex {
  int i = 0;
  int j = 1;
  int k = 2;
  int l = 3;

  /// Throws std::invalid_argument unless the four indices are distinct and
  /// within [0, p).
  void validate(Eigen::Index p) const;
  /// The covariance pairs (ik, il, jk, jl) the tetrad depends on.
  std::array<std::pair<int, int>, 4> pairs() const;

  friend bool operator==(const TetradIndex&, const TetradIndex&) = default;
};

/// All three tetrads of every 4-subset a < b < c < d:
/// (a,b,c,d), (a,c,b,d), (a,d,b,c).
std::vector<TetradIndex> all_tetrads(int p);

/// Empirical covariance with divisor n (not n - 1), mean-centered.
Eigen::MatrixXd empirical_covariance(const DataMatrix& data);
Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& rows);

struct TetradStat {
  double gamma = 0.0;
  /// d gamma / d(theta_ik, theta_il, theta_jk, theta_jl)
  /// = (theta_jl, -theta_jk, -theta_il, theta_ik).
  std::array<double, 4> gradient{};
};

TetradStat tetrad_stat(const Eigen::MatrixXd& theta, const TetradIndex& idx);

/// Gaussian asymptotic covariance of sqrt(n)(theta_hat - theta) restricted to
/// `pairs`: V_{ij,kl} = theta_ik theta_jl + theta_il theta_jk.
Eigen::MatrixXd asymptotic_v_normal(const Eigen::MatrixXd& theta,
                                    std::span<const std::pair<int, int>> pairs);

enum class Regime { regular, near_singular };

const char* regime_name(Regime r);

struct WaldReport {
  TetradIndex index;
  double gamma_hat = 0.0;
  double t_stat = 0.0;
  /// 1 - F_{chi^2_1}(T)
  double p_regular = 1.0;
  /// 1 - F_sing(T)
  double p_singular = 1.0;
  double gradient_norm = 0.0;
  Regime regime_hint = Regime::regular;
};

/// Raised when the estimated variance of the tetrad is zero.
class DegenerateCovarianceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wald test of a vanishing tetrad:
/// T = n gamma_hat^2 / (grad^T Sigma(theta_hat) grad).
///
/// The regime hint flags ||grad||^2 < 4 * max diag Sigma(theta_hat) *
/// sqrt(log n / n); it never changes the p-values.
WaldReport wald_tetrad_test(const DataMatrix& data, const TetradIndex& idx);

/// Same test from a precomputed covariance estimate and sample size n.
WaldReport wald_tetrad_test(const Eigen::MatrixXd& theta_hat, Eigen::Index n,
                            const TetradIndex& idx);

}  // namespace wald
