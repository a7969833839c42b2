#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "fracheat/exponent.hpp"
#include "fracheat/rng.hpp"
#include "fracheat/stable_path.hpp"

namespace fracheat {

/// A space-time node (t, x) with x in R^d.
struct FieldPoint {
  double t = 0.0;
  std::vector<double> x;
};

/// Covariance p_{|t_i - t_j| + 2 eps}(x_i - x_j) of the space-mollified noise.
struct CovarianceMatrix {
  std::vector<FieldPoint> points;
  double epsilon = 0.0;
  Eigen::MatrixXd entries;
};

/// `period`, if set, puts the nodes on the torus R^d / (period Z)^d and uses the periodized kernel
/// sum_k p(x - y + k period), which stays positive semidefinite for any kernel width.
CovarianceMatrix build_covariance(std::vector<FieldPoint> points, double epsilon,
                                  std::optional<double> period = std::nullopt);

/// Factor F (N x r) with F F^T = cov up to the jitter scale, reusable across draws.
///
/// Tries Cholesky; for semidefinite matrices falls back to diagonally pivoted Cholesky
/// truncated once all residual pivots are below 1e-9 max(diag) (residuals down to
/// -1e-10 trace count as rounding); then Cholesky once more after adding 1e-12 trace / N
/// to the diagonal. Anything else throws NumericalError carrying the smallest eigenvalue.
class GaussianSampler {
 public:
  explicit GaussianSampler(const Eigen::MatrixXd& cov);

  std::size_t size() const noexcept { return static_cast<std::size_t>(factor_.rows()); }
  const Eigen::MatrixXd& factor() const noexcept { return factor_; }
  /// Whether the diagonal jitter had to be applied.
  bool jittered() const noexcept { return jittered_; }

  Eigen::VectorXd sample(RngStream& rng) const;
  /// Colours a vector of standard normals.
  Eigen::VectorXd colour(const Eigen::VectorXd& z) const;

 private:
  Eigen::MatrixXd factor_;
  bool jittered_ = false;
};

Eigen::VectorXd sample_field(const CovarianceMatrix& cov, RngStream& rng);

/// Gram matrix of mollified inner products across M paths and one joint draw of
/// the Gaussian weights W(A^{eps,delta}(path_m)) with that covariance.
struct WickWeights {
  Eigen::MatrixXd gram;
  Eigen::VectorXd gaussians;
};

Eigen::MatrixXd mollified_gram(std::span<const Path> paths, MollifierParams moll, int d);
WickWeights sample_wick_weights(std::span<const Path> paths, MollifierParams moll, int d, RngStream& rng);

/// One draw of N(0, self_exponent(path)): the conditional law of the limiting
/// Gaussian functional given the path. d = 1 only.
double conditional_I_sample(const Path& path, int d, RngStream& rng);

}  // namespace fracheat
