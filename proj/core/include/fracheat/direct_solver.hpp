#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <ostream>
#include <vector>

#include "fracheat/feynman_kac.hpp"
#include "fracheat/gaussian_field.hpp"
#include "fracheat/model.hpp"
#include "fracheat/rng.hpp"

namespace fracheat {

inline constexpr std::size_t kMaxNoiseNodes = 4096;

/// Periodic grid x_j = center - L + 2 L j / n_space, j = 0..n_space-1, and n_time equal
/// steps on [0, t_horizon]. The center is the evaluation point, found at j = n_space / 2.
struct TorusGrid {
  double half_length = 8.0;
  std::size_t n_space = 64;
  std::size_t n_time = 64;
  double t_horizon = 1.0;
  double center = 0.0;

  /// L = 8 sqrt(t) by default.
  static TorusGrid make(double t_horizon, std::size_t n_space, std::size_t n_time, double center = 0.0,
                        double half_length = 0.0);

  double dt() const noexcept { return t_horizon / static_cast<double>(n_time); }
  double dx() const noexcept { return 2.0 * half_length / static_cast<double>(n_space); }
  double x(std::size_t j) const noexcept { return center - half_length + dx() * static_cast<double>(j); }
  std::size_t center_index() const noexcept { return n_space / 2; }
  void validate() const;
};

struct FieldState {
  std::vector<double> values;
  double time = 0.0;
};

/// Gaussian noise slabs with Cov(W(t_i, x_j), W(t_k, x_l)) = p_{|t_i - t_k| + 2 eps}(x_j - x_l),
/// t_i = i dt, on the window without wrap-around. The factorization is computed once and
/// reused for every draw.
class NoiseSlabSampler {
 public:
  NoiseSlabSampler(const TorusGrid& grid, double epsilon);
  /// n_time x n_space; row i holds the noise on [t_i, t_i + dt).
  Eigen::MatrixXd sample(RngStream& rng) const;
  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }

 private:
  TorusGrid grid_;
  Eigen::MatrixXd cov_;
  std::unique_ptr<GaussianSampler> sampler_;
};

Eigen::MatrixXd sample_noise_slab(const TorusGrid& grid, double epsilon, RngStream& rng);

/// Strang splitting for du = -(-Delta)^{alpha/2} u dt + u W dt on the torus: half step of
/// the spectral multiplier exp(-dt |k|^alpha / 4), pointwise exp(W dt), half step again.
class SplitStepSolver {
 public:
  SplitStepSolver(const TorusGrid& grid, double alpha, bool diffusion = true);
  ~SplitStepSolver();
  SplitStepSolver(const SplitStepSolver&) = delete;
  SplitStepSolver& operator=(const SplitStepSolver&) = delete;

  /// Advances by dt with the given noise row (size n_space; empty means zero noise).
  void step(FieldState& state, const double* noise_row, double dt) const;
  FieldState initial_state(const InitialCondition& u0) const;

 private:
  void diffuse(std::vector<double>& u, double dt) const;

  TorusGrid grid_;
  double alpha_;
  bool diffusion_;
  struct Plans;
  std::unique_ptr<Plans> plans_;
};

FieldState step(const SplitStepSolver& solver, FieldState state, const double* noise_row, double dt);

/// Runs one realization; returns the states after every `snapshot_every` steps (and the final one).
std::vector<FieldState> solve_realization(const TorusGrid& grid, const ModelParams& params, double epsilon,
                                          RngStream& rng, std::size_t snapshot_every = 0);

/// p-th moment of u^{eps,dt}(t, x) over independent noise realizations; realization r uses
/// RngStream(seed, r).
MomentEstimate ensemble_moment(const TorusGrid& grid, const ModelParams& params, double epsilon, int p,
                               std::size_t n_realizations, std::uint64_t seed, unsigned workers = 1);

/// CSV with columns time, x, u.
void write_snapshots_csv(std::ostream& os, const TorusGrid& grid, const std::vector<FieldState>& states);

}  // namespace fracheat
