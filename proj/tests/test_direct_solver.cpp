#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "fracheat/direct_solver.hpp"
#include "fracheat/errors.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/parallel.hpp"

using namespace fracheat;

namespace {

double bump_at(double x, double t, double a, double w) {
  const double s2 = w * w + t;
  return a * w / std::sqrt(s2) * std::exp(-x * x / (2 * s2));
}

}  // namespace

TEST(TorusGrid, DefaultsAndValidation) {
  const auto g = TorusGrid::make(0.25, 64, 32);
  EXPECT_DOUBLE_EQ(g.half_length, 4.0);
  EXPECT_DOUBLE_EQ(g.dt(), 0.25 / 32);
  EXPECT_DOUBLE_EQ(g.x(g.center_index()), 0.0);
  EXPECT_THROW(TorusGrid::make(1.0, 48, 8), DomainError);
  EXPECT_THROW(TorusGrid::make(0.0, 64, 8), DomainError);
}

TEST(SplitStep, ZeroNoiseKeepsConstant) {
  const auto g = TorusGrid::make(1.0, 32, 16);
  const SplitStepSolver solver(g, 1.3);
  auto state = solver.initial_state(InitialCondition::constant());
  const std::vector<double> zero(g.n_space, 0.0);
  for (int i = 0; i < 16; ++i) solver.step(state, zero.data(), g.dt());
  for (double v : state.values) EXPECT_NEAR(v, 1.0, 1e-14);
  EXPECT_NEAR(state.time, 1.0, 1e-14);
}

TEST(SplitStep, ZeroNoiseHeatEvolution) {
  const double t = 0.5;
  const auto g = TorusGrid::make(t, 256, 8);
  const SplitStepSolver solver(g, 2.0);
  const auto u0 = InitialCondition::gaussian_bump(1.0, 0.4);
  auto state = solver.initial_state(u0);
  const std::vector<double> zero(g.n_space, 0.0);
  for (std::size_t i = 0; i < g.n_time; ++i) solver.step(state, zero.data(), g.dt());
  for (std::size_t j = 0; j < g.n_space; j += 7) EXPECT_NEAR(state.values[j], bump_at(g.x(j), t, 1.0, 0.4), 1e-4);
}

TEST(SplitStep, ZeroDiffusionIsExactExponential) {
  const auto g = TorusGrid::make(1.0, 16, 4);
  const SplitStepSolver solver(g, 2.0, false);
  const auto u0 = InitialCondition::cosine(0.7);
  auto state = solver.initial_state(u0);
  RngStream rng(60, 0);
  std::vector<double> sum(g.n_space, 0.0);
  for (std::size_t i = 0; i < g.n_time; ++i) {
    std::vector<double> row(g.n_space);
    for (std::size_t j = 0; j < g.n_space; ++j) {
      row[j] = rng.normal();
      sum[j] += row[j] * g.dt();
    }
    solver.step(state, row.data(), g.dt());
  }
  for (std::size_t j = 0; j < g.n_space; ++j) {
    EXPECT_NEAR(state.values[j], u0(g.x(j)) * std::exp(sum[j]), 1e-13);
  }
}

TEST(SplitStep, SecondOrderInTime) {
  const double t = 0.5;
  auto run = [&](std::size_t nt) {
    const auto g = TorusGrid::make(t, 128, nt);
    const SplitStepSolver solver(g, 2.0);
    std::vector<double> v(g.n_space);
    for (std::size_t j = 0; j < g.n_space; ++j) v[j] = 0.8 * std::cos(g.x(j));
    auto s = solver.initial_state(InitialCondition::gaussian_bump(1.0, 0.5));
    for (std::size_t i = 0; i < nt; ++i) solver.step(s, v.data(), g.dt());
    return s.values[g.center_index()];
  };
  const double a = run(8), b = run(16), c = run(32), d = run(64);
  const double slope = (std::log2(std::abs(a - b) / std::abs(b - c)) + std::log2(std::abs(b - c) / std::abs(c - d))) / 2;
  EXPECT_GE(slope, 1.8);
}

TEST(SplitStep, TruncationInvariance) {
  ModelParams m;
  m.t_horizon = 0.5;
  m.u0 = InitialCondition::gaussian_bump(1.0, 0.5);
  auto center_value = [&](double L) {
    const auto g = TorusGrid::make(0.5, 128, 16, 0.0, L);
    const SplitStepSolver solver(g, 2.0);
    auto s = solver.initial_state(m.u0);
    const std::vector<double> zero(g.n_space, 0.0);
    for (std::size_t i = 0; i < g.n_time; ++i) solver.step(s, zero.data(), g.dt());
    return s.values[g.center_index()];
  };
  const double L = 8.0 * std::sqrt(0.5);
  EXPECT_LT(std::abs(center_value(2 * L) - center_value(L)), 1e-6);
}

TEST(NoiseSlab, CovarianceStructure) {
  const double eps = 0.1;
  const auto g = TorusGrid::make(2.0, 8, 4);  // dt = 0.5
  const NoiseSlabSampler sampler(g, eps);
  const auto& cov = sampler.covariance();
  ASSERT_EQ(cov.rows(), 32);
  // node (i, j) -> index i * n_space + j
  EXPECT_NEAR(cov(0, 0), heat_kernel(2 * eps, 0.0), 1e-14);
  EXPECT_NEAR(cov(0, 3), heat_kernel(2 * eps, 3 * g.dx()), 1e-14);
  EXPECT_NEAR(cov(0, 2 * 8), heat_kernel(1.0 + 2 * eps, 0.0), 1e-14);
  EXPECT_NEAR(cov(0, 2 * 8) / cov(0, 0), heat_kernel(1.0 + 2 * eps, 0.0) / heat_kernel(2 * eps, 0.0), 1e-12);
  // window restriction of the line noise: no wrap-around
  EXPECT_NEAR(cov(0, 7), heat_kernel(2 * eps, 7 * g.dx()), 1e-14);

  RngStream rng(61, 0);
  const std::size_t n = 20000;
  std::vector<double> c00(n), c01(n), c0t(n);
  for (std::size_t r = 0; r < n; ++r) {
    const Eigen::MatrixXd s = sampler.sample(rng);
    ASSERT_EQ(s.rows(), 4);
    ASSERT_EQ(s.cols(), 8);
    c00[r] = s(0, 0) * s(0, 0);
    c01[r] = s(0, 0) * s(0, 1);
    c0t[r] = s(0, 0) * s(2, 0);
  }
  EXPECT_NEAR(sample_stats(c00).mean, cov(0, 0), 3 * sample_stats(c00).std_error);
  EXPECT_NEAR(sample_stats(c01).mean, cov(0, 1), 3 * sample_stats(c01).std_error);
  EXPECT_NEAR(sample_stats(c0t).mean, cov(0, 16), 3 * sample_stats(c0t).std_error);
  EXPECT_THROW(NoiseSlabSampler(TorusGrid::make(1.0, 128, 64), eps), BudgetError);
}

TEST(Ensemble, VanishingNoiseGivesDeterministicValue) {
  ModelParams m;
  m.t_horizon = 0.5;
  m.u0 = InitialCondition::gaussian_bump(1.0, 0.5);
  const auto g = TorusGrid::make(0.5, 64, 8);
  const double det = bump_at(0.0, 0.5, 1.0, 0.5);
  for (int p : {1, 2}) {
    const auto e = ensemble_moment(g, m, 1e12, p, 20, 62);
    EXPECT_NEAR(e.value, std::pow(det, p), 1e-3);
  }
}

TEST(Ensemble, MomentsIncreaseWithOrderAndMeanAtLeastOne) {
  ModelParams m;
  m.t_horizon = 0.5;
  const auto g = TorusGrid::make(0.5, 16, 16);
  const auto e1 = ensemble_moment(g, m, 0.1, 1, 200, 63);
  const auto e2 = ensemble_moment(g, m, 0.1, 2, 200, 63);
  const auto e3 = ensemble_moment(g, m, 0.1, 3, 200, 63);
  EXPECT_LT(e1.value, e2.value);
  EXPECT_LT(e2.value, e3.value);
  EXPECT_GE(e1.value, 1.0 - 3 * e1.std_error);
  const auto w3 = ensemble_moment(g, m, 0.1, 1, 200, 63, 3);
  EXPECT_EQ(w3.value, e1.value);
}

TEST(Ensemble, RejectsHigherDimensionsAndWritesSnapshots) {
  ModelParams m;
  m.t_horizon = 0.5;
  const auto g = TorusGrid::make(0.5, 16, 8);
  RngStream rng(64, 0);
  const auto states = solve_realization(g, m, 0.1, rng, 4);
  ASSERT_EQ(states.size(), 3u);  // t = 0, 0.25, 0.5
  for (const auto& s : states) {
    for (double v : s.values) EXPECT_GT(v, 0.0);
  }
  std::ostringstream os;
  write_snapshots_csv(os, g, states);
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "time,x,u");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * 16);
  ModelParams two = m;
  two.d = 2;
  two.x_point = {0.0, 0.0};
  EXPECT_THROW(ensemble_moment(g, two, 0.1, 1, 2, 1), RegimeError);
}
