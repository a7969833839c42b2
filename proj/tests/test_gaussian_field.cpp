#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <vector>

#include "fracheat/errors.hpp"
#include "fracheat/exponent.hpp"
#include "fracheat/gaussian_field.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/stable_path.hpp"

using namespace fracheat;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<FieldPoint> random_nodes(std::size_t n, std::uint64_t stream) {
  RngStream rng(21, stream);
  std::vector<FieldPoint> pts(n);
  for (auto& p : pts) p = FieldPoint{rng.uniform(), {2.0 * rng.normal()}};
  return pts;
}

Path constant_path(double t, std::size_t n) { return Path{TimeGrid::uniform(t, n), 1, std::vector<double>(n + 1, 0.0)}; }

}  // namespace

TEST(Covariance, Entries) {
  const auto c = build_covariance({FieldPoint{0.3, {0.1}}, FieldPoint{0.3, {0.1}}}, 0.25);
  EXPECT_NEAR(c.entries(0, 0), 0.5641896, 1e-7);
  EXPECT_NEAR(c.entries(0, 1), 1.0 / std::sqrt(kPi), 1e-15);
  const auto far = build_covariance({FieldPoint{0.0, {0.0}}, FieldPoint{0.5, {0.7}}}, 0.1);
  EXPECT_NEAR(far.entries(0, 1), heat_kernel(0.5 + 0.2, 0.7), 1e-15);
  std::vector<FieldPoint> row;
  for (int j = 0; j < 6; ++j) row.push_back(FieldPoint{0.0, {0.3 * j}});
  const auto r = build_covariance(row, 0.1);
  for (int j = 1; j < 6; ++j) EXPECT_LT(r.entries(0, j), r.entries(0, j - 1));
  EXPECT_THROW(build_covariance(row, 0.0), DomainError);
  // periodic distance wraps around
  const auto per = build_covariance({FieldPoint{0.0, {-3.9}}, FieldPoint{0.0, {3.9}}}, 0.1, 8.0);
  EXPECT_NEAR(per.entries(0, 1), heat_kernel(0.2, 0.2), 1e-15);
}

TEST(Covariance, PositiveSemidefinite) {
  const auto c = build_covariance(random_nodes(8, 0), 0.05);
  const Eigen::MatrixXd j = c.entries + 1e-12 * Eigen::MatrixXd::Identity(8, 8);
  EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(j).eigenvalues().minCoeff(), 0.0);
}

TEST(GaussianSampler, ScalarAndDiagonal) {
  RngStream rng(22, 0);
  const GaussianSampler one(Eigen::MatrixXd::Constant(1, 1, 2.5));
  std::vector<double> sq(20000);
  for (auto& v : sq) v = std::pow(one.sample(rng)[0], 2);
  EXPECT_NEAR(sample_stats(sq).mean, 2.5, 3 * sample_stats(sq).std_error);

  const GaussianSampler diag(Eigen::Vector3d(1.0, 4.0, 0.25).asDiagonal().toDenseMatrix());
  std::vector<double> prod(20000);
  for (auto& v : prod) {
    const auto x = diag.sample(rng);
    v = x[0] * x[1];
  }
  EXPECT_LT(std::abs(sample_stats(prod).mean), 3 * sample_stats(prod).std_error);
}

TEST(GaussianSampler, EmpiricalCovarianceOnNodeGrid) {
  std::vector<FieldPoint> pts;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) pts.push_back(FieldPoint{0.25 * i, {0.3 * j}});
  }
  const auto cov = build_covariance(pts, 0.1);
  RngStream rng(23, 0);
  const std::size_t n = 10000;
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(16, 16);
  for (std::size_t r = 0; r < n; ++r) {
    const auto x = sample_field(cov, rng);
    acc += x * x.transpose();
  }
  acc /= static_cast<double>(n);
  const auto& S = cov.entries;
  for (Eigen::Index i = 0; i < 16; ++i) {
    for (Eigen::Index j = 0; j < 16; ++j) {
      const double se = std::sqrt((S(i, i) * S(j, j) + S(i, j) * S(i, j)) / static_cast<double>(n));
      EXPECT_LT(std::abs(acc(i, j) - S(i, j)), 4 * se) << i << "," << j;
    }
  }
}

TEST(GaussianSampler, SemidefiniteAndIndefiniteInputs) {
  // rank one: needs the pivoted route
  Eigen::Vector3d v(1.0, 2.0, -1.0);
  const GaussianSampler rank1(v * v.transpose());
  RngStream rng(24, 0);
  const auto x = rank1.sample(rng);
  EXPECT_NEAR(x[1], 2.0 * x[0], 1e-12);
  Eigen::Matrix2d bad;
  bad << 1.0, 2.0, 2.0, 1.0;
  try {
    GaussianSampler s(bad);
    FAIL() << "indefinite matrix accepted";
  } catch (const NumericalError& e) {
    EXPECT_NEAR(e.min_eigenvalue(), -1.0, 1e-12);
  }
}

TEST(WickWeights, SinglePathVarianceAndIdenticalPaths) {
  RngStream prng(25, 0);
  const std::vector<double> x0{0.0};
  const auto path = sample_path(2.0, 1, TimeGrid::uniform(1.0, 8), x0, prng);
  const MollifierParams moll{0.05, 0.05};
  const std::vector<Path> one{path};
  RngStream rng(25, 1);
  const double inner = mollified_inner(path, path, moll, 1);
  std::vector<double> sq(3000);
  for (auto& s : sq) {
    const auto w = sample_wick_weights(one, moll, 1, rng);
    EXPECT_NEAR(w.gram(0, 0), inner, 1e-14 * inner);
    s = w.gaussians[0] * w.gaussians[0];
  }
  EXPECT_NEAR(sample_stats(sq).mean, inner, 3 * sample_stats(sq).std_error);

  const std::vector<Path> twins{path, path};
  for (int r = 0; r < 20; ++r) {
    const auto w = sample_wick_weights(twins, moll, 1, rng);
    EXPECT_NEAR(w.gaussians[0], w.gaussians[1], 1e-10);
  }
}

TEST(WickWeights, LognormalMeanIsOne) {
  const auto grid = TimeGrid::uniform(1.0, 32);
  RngStream rng(26, 0);
  const std::vector<double> x0{0.0};
  std::vector<Path> paths;
  for (int i = 0; i < 64; ++i) paths.push_back(sample_path(2.0, 1, grid, x0, rng));
  const MollifierParams moll{0.05, 0.05};
  const auto gram = mollified_gram(paths, moll, 1);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10 * gram.trace());
  const GaussianSampler sampler(gram);
  const std::size_t draws = 40000;
  Eigen::MatrixXd vals(64, static_cast<Eigen::Index>(draws));
  for (std::size_t r = 0; r < draws; ++r) {
    const auto g = sampler.sample(rng);
    vals.col(static_cast<Eigen::Index>(r)) = (g - 0.5 * gram.diagonal()).array().exp().matrix();
  }
  int exceed = 0;
  for (Eigen::Index m = 0; m < 64; ++m) {
    std::vector<double> v(draws);
    for (std::size_t r = 0; r < draws; ++r) v[r] = vals(m, static_cast<Eigen::Index>(r));
    const auto st = sample_stats(v);
    if (std::abs(st.mean - 1.0) > 3 * st.std_error) ++exceed;
  }
  EXPECT_LE(exceed, 1);  // 64 weights at the 3-sigma level
}

TEST(WickWeights, Deterministic) {
  const auto grid = TimeGrid::uniform(1.0, 16);
  RngStream prng(27, 0);
  const std::vector<double> x0{0.0};
  std::vector<Path> paths;
  for (int i = 0; i < 5; ++i) paths.push_back(sample_path(1.5, 1, grid, x0, prng));
  RngStream a(27, 1);
  RngStream b(27, 1);
  const auto wa = sample_wick_weights(paths, {0.1, 0.1}, 1, a);
  const auto wb = sample_wick_weights(paths, {0.1, 0.1}, 1, b);
  EXPECT_EQ(wa.gaussians, wb.gaussians);
  EXPECT_EQ(wa.gram, wb.gram);
}

TEST(ConditionalI, VarianceMeanAndScaling) {
  // each draw re-evaluates the exponent, so keep the grid coarse
  const auto c1 = constant_path(1.0, 64);
  const auto c4 = constant_path(4.0, 64);
  RngStream rng(28, 0);
  const std::size_t n = 100000;
  std::vector<double> x(n);
  std::vector<double> sq(n);
  std::vector<double> sq4(n / 4);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = conditional_I_sample(c1, 1, rng);
    sq[i] = x[i] * x[i];
    if (i < n / 4) sq4[i] = std::pow(conditional_I_sample(c4, 1, rng), 2);
  }
  EXPECT_NEAR(sample_stats(sq).mean, 1.0638463, 3 * sample_stats(sq).std_error + 1e-3);
  EXPECT_NEAR(sample_stats(x).mean, 0.0, 3 * sample_stats(x).std_error);
  const double ratio = sample_stats(sq4).mean / sample_stats(sq).mean;
  const double rel = std::hypot(sample_stats(sq4).std_error / sample_stats(sq4).mean,
                                sample_stats(sq).std_error / sample_stats(sq).mean);
  EXPECT_NEAR(ratio, 8.0, 3 * 8.0 * rel);
  Path two{TimeGrid::uniform(1.0, 8), 2, std::vector<double>(18, 0.0)};
  EXPECT_THROW(conditional_I_sample(two, 2, rng), RegimeError);
}

TEST(Covariance, PeriodizedKernelOnTorus) {
  const double period = 4.0;
  for (double eps : {0.01, 0.5, 1e3}) {
    std::vector<FieldPoint> ring;
    for (int j = 0; j < 32; ++j) ring.push_back(FieldPoint{0.0, {-2.0 + period * j / 32.0}});
    const auto c = build_covariance(ring, eps, period);
    // Riemann sum of a periodized Gaussian over one period is exact up to aliasing: 1 / period.
    EXPECT_NEAR(c.entries.row(5).sum() * period / 32.0, 1.0, 1e-10) << "eps=" << eps;
    EXPECT_NEAR(c.entries(0, 31), c.entries(0, 1), 1e-14 * c.entries(0, 0));
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.entries);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * c.entries.trace()) << "eps=" << eps;
  }
  // narrow kernel: a single image dominates
  const auto n = build_covariance({FieldPoint{0.0, {0.1}}, FieldPoint{0.0, {0.4}}}, 0.01, period);
  EXPECT_NEAR(n.entries(0, 1), heat_kernel(0.02, 0.3), 1e-15);
}
