#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "fracheat/errors.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/rng.hpp"
#include "fracheat/stable_path.hpp"

using namespace fracheat;

namespace {

double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / a.size() - static_cast<double>(j) / b.size()));
  }
  return d;
}

// Anderson-Darling statistic against a fully specified N(0, sigma^2)
double anderson_darling(std::vector<double> x, double sigma) {
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fi = 0.5 * std::erfc(-x[i] / (sigma * std::sqrt(2.0)));
    const double fj = 0.5 * std::erfc(-x[x.size() - 1 - i] / (sigma * std::sqrt(2.0)));
    s += (2.0 * static_cast<double>(i) + 1.0) * (std::log(fi) + std::log1p(-fj));
  }
  return -n - s / n;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  using A4 = std::array<std::uint32_t, 4>;
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}), (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, DeterministicAndDistinct) {
  RngStream a(42, 7);
  RngStream b(42, 7);
  RngStream c(42, 8);
  int same = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a();
    EXPECT_EQ(x, b());
    if (x == c()) ++same;
  }
  EXPECT_LT(same, 3);
  RngStream u(1, 0);
  std::vector<double> v(100000);
  for (auto& x : v) {
    x = u.uniform();
    ASSERT_GT(x, 0.0);
    ASSERT_LT(x, 1.0);
  }
  const auto s = sample_stats(v);
  EXPECT_NEAR(s.mean, 0.5, 3 * s.std_error);
}

TEST(TimeGrid, Construction) {
  const auto g = TimeGrid::uniform(2.0, 8);
  EXPECT_EQ(g.n_steps(), 8u);
  EXPECT_EQ(g.time(0), 0.0);
  EXPECT_EQ(g.horizon(), 2.0);
  EXPECT_TRUE(g.is_uniform());
  EXPECT_DOUBLE_EQ(g.max_step(), 0.25);
  EXPECT_EQ(TimeGrid::with_density(1.5).n_steps(), 384u);
  EXPECT_EQ(g.refined().n_steps(), 16u);
  EXPECT_EQ(g.coarsened().n_steps(), 4u);
  EXPECT_EQ(g.refined().coarsened(), g);
  EXPECT_THROW(TimeGrid::from_times({0.0, 0.5, 0.5, 1.0}), DomainError);
  EXPECT_THROW(TimeGrid::from_times({0.1, 0.5}), DomainError);
  const auto nu = TimeGrid::from_times({0.0, 0.1, 0.5, 1.0});
  EXPECT_FALSE(nu.is_uniform());
  EXPECT_DOUBLE_EQ(nu.max_step(), 0.5);
}

TEST(Subordinator, MedianMatchesLevyReference) {
  // alpha = 1: E exp(-lambda S) = exp(-sqrt(lambda)/2), a Levy law with scale 1/8,
  // which is also the law of (1/8) / Z^2.
  const std::size_t n = 100000;
  RngStream rng(5, 0);
  RngStream ref(5, 1);
  std::vector<double> s(n);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = sample_subordinator_increment(1.0, 1.0, rng);
    const double z = ref.normal();
    r[i] = 0.125 / (z * z);
  }
  auto median = [](std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
    return v[v.size() / 2];
  };
  const double m_ref = median(r);
  // fraction of subordinator draws below the reference median is 1/2 +- binomial noise
  const double frac = static_cast<double>(std::count_if(s.begin(), s.end(), [&](double x) { return x < m_ref; })) / n;
  EXPECT_NEAR(frac, 0.5, 3.0 * std::sqrt(0.5 / n));
  EXPECT_NEAR(median(s), m_ref, 0.02 * m_ref);
  EXPECT_THROW(sample_subordinator_increment(2.0, 1.0, rng), DomainError);
}

TEST(Subordinator, SelfScaling) {
  const double alpha = 1.5;
  const double dt = 0.3;
  RngStream a(6, 0);
  RngStream b(6, 1);
  std::vector<double> x(10000);
  std::vector<double> y(10000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = sample_subordinator_increment(alpha, dt, a);
    y[i] = std::pow(dt, 2.0 / alpha) * sample_subordinator_increment(alpha, 1.0, b);
  }
  EXPECT_LT(ks_distance(x, y), 0.02);
}

TEST(StableIncrement, GaussianVariance) {
  RngStream rng(7, 0);
  std::vector<double> sq(100000);
  for (auto& v : sq) {
    const double x = sample_increment(2.0, 1, 0.25, rng)[0];
    v = x * x;
  }
  const auto s = sample_stats(sq);
  EXPECT_NEAR(s.mean, 0.25, 3 * s.std_error);
}

TEST(StableIncrement, CharacteristicFunction) {
  for (auto [alpha, d] : {std::pair{1.0, 1}, std::pair{1.5, 2}, std::pair{0.8, 3}}) {
    RngStream rng(8, static_cast<std::uint64_t>(d));
    std::vector<double> c(100000);
    for (auto& v : c) v = std::cos(sample_increment(alpha, d, 1.0, rng)[0]);
    EXPECT_NEAR(sample_stats(c).mean, std::exp(-0.5), 0.01) << "alpha=" << alpha;
  }
  RngStream rng(8, 9);
  const auto z = sample_increment(1.3, 3, 0.0, rng);
  EXPECT_EQ(z, std::vector<double>(3, 0.0));
}

TEST(StablePath, EndpointLawAndShift) {
  const auto one_step = TimeGrid::uniform(0.7, 1);
  const std::vector<double> zero{0.0};
  const std::vector<double> shift{2.5};
  std::vector<double> c(50000);
  for (std::size_t i = 0; i < c.size(); ++i) {
    RngStream rng(9, i);
    c[i] = std::cos(1.3 * sample_path(1.5, 1, one_step, zero, rng).end()[0]);
  }
  EXPECT_NEAR(sample_stats(c).mean, std::exp(-0.7 * std::pow(1.3, 1.5) / 2), 3 * sample_stats(c).std_error + 1e-3);

  const auto grid = TimeGrid::uniform(1.0, 64);
  RngStream r1(10, 3);
  RngStream r2(10, 3);
  const auto p0 = sample_path(1.2, 1, grid, zero, r1);
  const auto p1 = sample_path(1.2, 1, grid, shift, r2);
  EXPECT_EQ(p0.start()[0], 0.0);
  EXPECT_EQ(p1.start()[0], 2.5);
  for (std::size_t i = 0; i < p0.size(); ++i) EXPECT_NEAR(p1.at(i)[0] - 2.5, p0.at(i)[0], 1e-12);
}

TEST(StablePath, StreamIndependence) {
  const auto grid = TimeGrid::uniform(1.0, 8);
  const std::vector<double> zero{0.0};
  const std::size_t n = 20000;
  std::vector<double> a(n);
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    RngStream ra(12, i);
    RngStream rb(12, i + n);
    a[i] = sample_path(2.0, 1, grid, zero, ra).end()[0];
    b[i] = sample_path(2.0, 1, grid, zero, rb).end()[0];
  }
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = a[i] * b[i];
  const auto s = sample_stats(prod);
  EXPECT_LT(std::abs(s.mean), 3 * s.std_error);
}

TEST(StablePath, RefinementKeepsMarginalLaw) {
  const auto coarse = TimeGrid::uniform(1.0, 4);
  const auto fine = coarse.refined();
  const std::vector<double> zero{0.0};
  std::vector<double> a(10000);
  std::vector<double> b(10000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    RngStream r(13, i);
    a[i] = sample_path(1.4, 1, coarse, zero, r).at(2)[0];
    RngStream s(13, i);
    b[i] = sample_path(1.4, 1, fine, zero, s).at(4)[0];
  }
  EXPECT_LT(ks_distance(a, b), 0.02);
}

TEST(StablePath, GaussianEndpointPassesAndersonDarling) {
  const auto grid = TimeGrid::uniform(1.0, 16);
  const std::vector<double> zero{0.0};
  std::vector<double> x(10000);
  for (std::size_t i = 0; i < x.size(); ++i) {
    RngStream r(14, i);
    x[i] = sample_path(2.0, 1, grid, zero, r).end()[0];
  }
  EXPECT_LT(anderson_darling(x, 1.0), 3.857);  // 1% critical value, case 0
}

TEST(StablePath, ReproducibleAndCsv) {
  const auto grid = TimeGrid::uniform(1.0, 10);
  const std::vector<double> x0{0.0, 1.0};
  RngStream r1(15, 2);
  RngStream r2(15, 2);
  const auto a = sample_path(0.9, 2, grid, x0, r1);
  const auto b = sample_path(0.9, 2, grid, x0, r2);
  EXPECT_EQ(a.positions, b.positions);
  for (double v : a.positions) EXPECT_TRUE(std::isfinite(v));
  std::ostringstream os;
  write_path_csv(os, a);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "time,x_1,x_2");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 12);
}
