#include "fracheat/gaussian_field.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fracheat/errors.hpp"
#include "fracheat/kernel.hpp"

namespace fracheat {

namespace {

// Diagonally pivoted Cholesky of a semidefinite matrix, stopped once every residual
// diagonal entry is below `stop`. Returns the N x rank factor, or nothing if a residual
// diagonal falls below `floor` (the matrix is then indefinite beyond rounding).
std::optional<Eigen::MatrixXd> pivoted_cholesky(const Eigen::MatrixXd& a, double stop, double floor) {
  const auto n = a.rows();
  Eigen::VectorXd resid = a.diagonal();
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  Eigen::Index rank = 0;
  for (; rank < n; ++rank) {
    Eigen::Index piv = -1;
    double best = stop;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!used[static_cast<std::size_t>(i)] && resid[i] > best) {
        best = resid[i];
        piv = i;
      }
    }
    if (piv < 0) break;
    used[static_cast<std::size_t>(piv)] = true;
    const double root = std::sqrt(best);
    Eigen::VectorXd col = a.col(piv);
    if (rank > 0) col.noalias() -= l.leftCols(rank) * l.row(piv).head(rank).transpose();
    col /= root;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (used[static_cast<std::size_t>(i)]) col[i] = 0.0;
    }
    col[piv] = root;
    l.col(rank) = col;
    resid -= col.cwiseAbs2();
    resid[piv] = 0.0;
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!used[static_cast<std::size_t>(i)] && resid[i] < floor) return std::nullopt;
  }
  return Eigen::MatrixXd(l.leftCols(rank));
}

// sum_k p_var(x + k P): image sum for narrow kernels, its Fourier (theta) series for wide ones.
double periodic_heat_kernel(double var, double x, double period) {
  constexpr double kPi = std::numbers::pi;
  x = std::remainder(x, period);
  const double width = std::sqrt(var);
  const double images = 9.0 * width / period;
  const double modes = 9.0 * period / (2.0 * kPi * width);
  if (images <= modes) {
    const int K = static_cast<int>(std::ceil(images)) + 1;
    double s = 0.0;
    for (int k = -K; k <= K; ++k) s += heat_kernel(var, x + k * period);
    return s;
  }
  const int M = static_cast<int>(std::ceil(modes)) + 1;
  double s = 1.0;
  for (int m = 1; m <= M; ++m) {
    const double w = 2.0 * kPi * m / period;
    s += 2.0 * std::exp(-0.5 * var * w * w) * std::cos(w * x);
  }
  return s / period;
}

}  // namespace

CovarianceMatrix build_covariance(std::vector<FieldPoint> points, double epsilon, std::optional<double> period) {
  if (!(epsilon > 0.0)) throw DomainError("pointwise noise covariance needs epsilon > 0");
  if (period && !(*period > 0.0)) throw DomainError("torus period must be positive");
  const auto n = static_cast<Eigen::Index>(points.size());
  const std::size_t d = points.empty() ? 1 : points.front().x.size();
  for (const auto& p : points) {
    if (p.x.size() != d || d == 0) throw DomainError("covariance nodes must share a dimension d >= 1");
  }
  CovarianceMatrix cov{std::move(points), epsilon, Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const auto& a = cov.points[static_cast<std::size_t>(i)];
      const auto& b = cov.points[static_cast<std::size_t>(j)];
      const double var = std::abs(a.t - b.t) + 2.0 * epsilon;
      double v = 0.0;
      if (period) {
        v = 1.0;
        for (std::size_t k = 0; k < d; ++k) v *= periodic_heat_kernel(var, a.x[k] - b.x[k], *period);
      } else {
        double r2 = 0.0;
        for (std::size_t k = 0; k < d; ++k) r2 += (a.x[k] - b.x[k]) * (a.x[k] - b.x[k]);
        v = heat_kernel_r2(var, r2, static_cast<int>(d));
      }
      cov.entries(i, j) = v;
      cov.entries(j, i) = v;
    }
  }
  return cov;
}

GaussianSampler::GaussianSampler(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) throw DomainError("covariance must be square");
  const auto n = cov.rows();
  if (n == 0) return;
  const double stop = 1e-9 * cov.diagonal().maxCoeff();
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  // A pivot at rounding level means the matrix is singular in practice; plain LLT would
  // then leave sqrt(eps)-sized noise in directions that should carry none.
  if (llt.info() == Eigen::Success && llt.matrixLLT().diagonal().cwiseAbs2().minCoeff() > stop) {
    factor_ = llt.matrixL();
    return;
  }
  const double trace = cov.trace();
  if (auto low_rank = pivoted_cholesky(cov, stop, -1e-10 * trace)) {
    factor_ = std::move(*low_rank);
    return;
  }
  Eigen::MatrixXd jittered = cov;
  jittered.diagonal().array() += 1e-12 * trace / static_cast<double>(n);
  Eigen::LLT<Eigen::MatrixXd> retry(jittered);
  if (retry.info() == Eigen::Success) {
    factor_ = retry.matrixL();
    jittered_ = true;
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  std::ostringstream os;
  os << "covariance factorization failed after jitter; min eigenvalue " << min_eig;
  throw NumericalError(os.str(), min_eig);
}

Eigen::VectorXd GaussianSampler::colour(const Eigen::VectorXd& z) const { return factor_ * z; }

Eigen::VectorXd GaussianSampler::sample(RngStream& rng) const {
  Eigen::VectorXd z(factor_.cols());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return colour(z);
}

Eigen::VectorXd sample_field(const CovarianceMatrix& cov, RngStream& rng) {
  return GaussianSampler(cov.entries).sample(rng);
}

Eigen::MatrixXd mollified_gram(std::span<const Path> paths, MollifierParams moll, int d) {
  const auto m = static_cast<Eigen::Index>(paths.size());
  Eigen::MatrixXd gram(m, m);
  if (m == 0) return gram;
  for (const auto& p : paths) {
    if (!(p.grid == paths.front().grid)) throw DomainError("paths must share a time grid");
    if (p.d != d) throw DomainError("path dimension does not match d");
  }
  MollifiedQuadrature quad(paths.front().grid, d, moll);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      const double v = quad.inner(paths[static_cast<std::size_t>(i)].positions,
                                  paths[static_cast<std::size_t>(j)].positions);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return gram;
}

WickWeights sample_wick_weights(std::span<const Path> paths, MollifierParams moll, int d, RngStream& rng) {
  WickWeights w;
  w.gram = mollified_gram(paths, moll, d);
  w.gaussians = GaussianSampler(w.gram).sample(rng);
  return w;
}

double conditional_I_sample(const Path& path, int d, RngStream& rng) {
  if (d != 1) throw RegimeError(regime::kStratonovichNeedsD1, "conditional law of I needs d = 1");
  const double var = self_exponent(path, d).value;
  return std::sqrt(var) * rng.normal();
}

}  // namespace fracheat
