#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fracheat/chaos.hpp"
#include "fracheat/errors.hpp"
#include "fracheat/feynman_kac.hpp"
#include "fracheat/parallel.hpp"

using namespace fracheat;
constexpr double kPi = std::numbers::pi;

namespace {

MonteCarloSetup setup(int p, std::size_t n, double t, std::size_t steps, std::uint64_t seed = 31) {
  MonteCarloSetup mc;
  mc.p = p;
  mc.n_samples = n;
  mc.grid = TimeGrid::uniform(t, steps);
  mc.seed = seed;
  return mc;
}

}  // namespace

TEST(SkoMoment, ConstantInitialDataIsExact) {
  ModelParams m;
  const auto e = sko_moment(m, setup(1, 500, 1.0, 64));
  EXPECT_EQ(e.value, 1.0);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.flavor, Flavor::skorohod);
  EXPECT_EQ(e.grid_steps, 64u);
}

TEST(SkoMoment, GaussianBumpMatchesConvolution) {
  for (double alpha : {1.0, 2.0}) {
    ModelParams m;
    m.alpha = alpha;
    m.x_point = {0.3};
    m.u0 = InitialCondition::gaussian_bump(2.0, 0.4);
    const auto e = sko_moment(m, setup(1, 40000, 1.0, 16));
    EXPECT_NEAR(e.value, sko_mean_exact(m), 3 * e.std_error) << "alpha=" << alpha;
  }
}

TEST(SkoMeanExact, ClosedForms) {
  ModelParams m;
  EXPECT_EQ(sko_mean_exact(m), 1.0);
  m.x_point = {0.8};
  m.t_horizon = 0.6;
  for (double alpha : {1.0, 1.5, 2.0}) {
    m.alpha = alpha;
    m.u0 = InitialCondition::cosine(2.0);
    EXPECT_NEAR(sko_mean_exact(m), std::exp(-0.6 * std::pow(2.0, alpha) / 2) * std::cos(1.6), 1e-8);
  }
  m.alpha = 2.0;
  m.u0 = InitialCondition::gaussian_bump(1.5, 0.5);
  EXPECT_NEAR(sko_mean_exact(m), 1.5 * 0.5 / std::sqrt(0.25 + 0.6) * std::exp(-0.64 / (2 * 0.85)), 1e-9);
}

TEST(StratMoment, JensenLowerBound) {
  // E V over Brownian paths = int int (4 pi |s - r|)^{-1/2} = (8/3)(4 pi)^{-1/2}
  ModelParams m;
  const auto e = strat_moment(m, setup(1, 4000, 1.0, 128));
  const double ev = 8.0 / 3.0 / std::sqrt(4 * kPi);
  EXPECT_GE(e.value, std::exp(0.5 * ev) - 3 * e.std_error);
  EXPECT_LE(e.value, std::exp(0.5 * 1.0638463));
}

TEST(StratMoment, SmallTimeNearOne) {
  ModelParams m;
  m.t_horizon = 0.01;
  const auto e = strat_moment(m, setup(1, 500, 0.01, 16));
  EXPECT_GE(e.value, 1.0);
  EXPECT_LE(e.value, 1.2);
}

TEST(Moments, OrderingSampleBySample) {
  ModelParams m;
  for (int p : {1, 2, 3}) {
    std::vector<SampleExponents> ex;
    const auto [strat, sko] = paired_moments(m, setup(p, 300, 1.0, 64, 40 + static_cast<std::uint64_t>(p)), &ex);
    for (const auto& s : ex) {
      EXPECT_GE(s.self_sum, 0.0);
      EXPECT_GE(s.u0_weight * std::exp(0.5 * s.self_sum + s.cross_sum), s.u0_weight * std::exp(s.cross_sum));
      EXPECT_LE(s.self_sum, p * 1.0638463 * (1 + 1e-12));
    }
    EXPECT_GE(strat.value, sko.value - 3 * (strat.std_error + sko.std_error));
  }
}

TEST(Moments, RegimeErrors) {
  ModelParams m;
  m.d = 2;
  m.x_point = {0.0, 0.0};
  EXPECT_THROW(strat_moment(m, setup(1, 10, 1.0, 8)), RegimeError);
  m.alpha = 0.5;
  m.d = 3;
  m.x_point = {0.0, 0.0, 0.0};
  EXPECT_THROW(sko_moment(m, setup(2, 10, 1.0, 8)), RegimeError);
  ModelParams ok;
  EXPECT_THROW(sko_moment(ok, setup(1, 10, 2.0, 8)), DomainError);  // grid horizon mismatch
}

TEST(SkoMoment, TwoDimensionalSecondMomentIsFinite) {
  ModelParams m;
  m.d = 2;
  m.x_point = {0.0, 0.0};
  const auto e = sko_moment(m, setup(2, 200, 1.0, 32));
  EXPECT_TRUE(std::isfinite(e.value));
  EXPECT_GT(e.value, 1.0);
}

TEST(SkoMoment, SmallTimeExpansion) {
  ModelParams m;
  m.t_horizon = 0.25;
  const auto e = sko_moment(m, setup(2, 20000, 0.25, 64));
  const auto c1 = chaos_term(1, 2.0, 1, 0.25);
  EXPECT_LT(std::abs((e.value - 1.0) - c1.value) / c1.value, 0.10);
}

TEST(Moments, SeedDeterminismAndWorkerInvariance) {
  ModelParams m;
  auto mc = setup(2, 200, 1.0, 32);
  const auto a = sko_moment(m, mc);
  mc.workers = 3;
  const auto b = sko_moment(m, mc);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
  mc.seed = 32;
  EXPECT_NE(sko_moment(m, mc).value, a.value);
}

TEST(SolutionSamples, ZeroFieldAndPositivity) {
  ModelParams m;
  m.u0 = InitialCondition::gaussian_bump(1.0, 0.7);
  WickWeights w;
  w.gram = Eigen::MatrixXd::Identity(3, 3);
  w.gaussians = Eigen::VectorXd::Zero(3);
  const auto s = solution_from_weights({0.2, 0.4, 0.9}, w, {0.1, 0.1}, Flavor::stratonovich);
  EXPECT_NEAR(s.value, 0.5, 1e-15);
  EXPECT_EQ(s.inner_paths, 3u);
  const auto k = solution_from_weights({0.2, 0.4, 0.9}, w, {0.1, 0.1}, Flavor::skorohod);
  EXPECT_NEAR(k.value, 0.5 * std::exp(-0.5), 1e-15);

  const auto grid = TimeGrid::uniform(1.0, 16);
  ModelParams one;
  for (std::uint64_t r = 0; r < 20; ++r) {
    RngStream a(50, r);
    RngStream b(50, r);
    const auto strat = strat_solution_sample(one, 16, {0.1, 0.1}, grid, a);
    const auto sko = sko_solution_sample(one, 16, {0.1, 0.1}, grid, b);
    EXPECT_GT(strat.value, 0.0);
    EXPECT_LE(sko.value, strat.value);
  }
  ModelParams two = one;
  two.d = 2;
  two.x_point = {0.0, 0.0};
  RngStream c(50, 99);
  EXPECT_THROW(sko_solution_sample(two, 4, {0.1, 0.1}, grid, c), RegimeError);
}

TEST(SolutionSamples, EnsembleMeansMatchMomentFormulas) {
  ModelParams m;
  m.t_horizon = 0.5;
  const auto grid = TimeGrid::uniform(0.5, 16);
  const MollifierParams moll{0.1, 0.5 / 16};
  const std::size_t outer = 400;
  std::vector<double> strat(outer);
  std::vector<double> sko(outer);
  for (std::size_t r = 0; r < outer; ++r) {
    RngStream a(51, r);
    strat[r] = strat_solution_sample(m, 16, moll, grid, a).value;
    RngStream b(52, r);
    sko[r] = sko_solution_sample(m, 16, moll, grid, b).value;
  }
  auto mc = setup(1, 4000, 0.5, 16, 53);
  const auto target = strat_moment_mollified(m, mc, moll);
  const auto s = sample_stats(strat);
  EXPECT_NEAR(s.mean, target.value, 3 * std::hypot(s.std_error, target.std_error));
  const auto k = sample_stats(sko);
  EXPECT_NEAR(k.mean, 1.0, 3 * k.std_error);
}
