#include "fracheat/direct_solver.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>

#include "fracheat/csv.hpp"
#include "fracheat/errors.hpp"
#include "fracheat/parallel.hpp"

namespace fracheat {

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

TorusGrid TorusGrid::make(double t_horizon, std::size_t n_space, std::size_t n_time, double center,
                          double half_length) {
  TorusGrid g;
  g.t_horizon = t_horizon;
  g.n_space = n_space;
  g.n_time = n_time;
  g.center = center;
  g.half_length = half_length > 0.0 ? half_length : 8.0 * std::sqrt(t_horizon);
  g.validate();
  return g;
}

void TorusGrid::validate() const {
  if (!(t_horizon > 0.0)) throw DomainError("torus grid needs t > 0");
  if (!(half_length > 0.0)) throw DomainError("torus half length must be positive");
  if (n_space < 2 || (n_space & (n_space - 1)) != 0) throw DomainError("n_space must be a power of two");
  if (n_time < 1) throw DomainError("n_time must be positive");
}

NoiseSlabSampler::NoiseSlabSampler(const TorusGrid& grid, double epsilon) : grid_(grid) {
  grid_.validate();
  const std::size_t nodes = grid_.n_time * grid_.n_space;
  if (nodes > kMaxNoiseNodes) throw BudgetError("noise slab exceeds 4096 covariance nodes");
  std::vector<FieldPoint> pts;
  pts.reserve(nodes);
  for (std::size_t i = 0; i < grid_.n_time; ++i) {
    for (std::size_t j = 0; j < grid_.n_space; ++j) {
      pts.push_back({grid_.dt() * static_cast<double>(i), {grid_.x(j)}});
    }
  }
  // The line noise restricted to the window: Euclidean distances, so the matrix is an exact
  // covariance for every epsilon. Wrapped distances differ only by p(L)-sized terms.
  auto cov = build_covariance(std::move(pts), epsilon);
  cov_ = std::move(cov.entries);
  sampler_ = std::make_unique<GaussianSampler>(cov_);
}

Eigen::MatrixXd NoiseSlabSampler::sample(RngStream& rng) const {
  const Eigen::VectorXd v = sampler_->sample(rng);
  Eigen::MatrixXd slab(grid_.n_time, grid_.n_space);
  for (std::size_t i = 0; i < grid_.n_time; ++i) {
    for (std::size_t j = 0; j < grid_.n_space; ++j) {
      slab(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          v[static_cast<Eigen::Index>(i * grid_.n_space + j)];
    }
  }
  return slab;
}

Eigen::MatrixXd sample_noise_slab(const TorusGrid& grid, double epsilon, RngStream& rng) {
  return NoiseSlabSampler(grid, epsilon).sample(rng);
}

struct SplitStepSolver::Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  std::vector<double> symbol;  // |k|^alpha per retained mode
  ~Plans() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

SplitStepSolver::SplitStepSolver(const TorusGrid& grid, double alpha, bool diffusion)
    : grid_(grid), alpha_(alpha), diffusion_(diffusion), plans_(std::make_unique<Plans>()) {
  grid_.validate();
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
  const auto n = static_cast<int>(grid_.n_space);
  const std::size_t modes = grid_.n_space / 2 + 1;
  plans_->symbol.resize(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    const double k = std::numbers::pi * static_cast<double>(m) / grid_.half_length;
    plans_->symbol[m] = std::pow(k, alpha_);
  }
  std::vector<double> real(grid_.n_space);
  std::vector<std::complex<double>> spec(modes);
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  std::lock_guard<std::mutex> lock(fftw_planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_1d(n, real.data(), c, FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans_->backward = fftw_plan_dft_c2r_1d(n, c, real.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plans_->forward || !plans_->backward) throw NumericalError("FFTW planning failed", 0.0);
}

SplitStepSolver::~SplitStepSolver() = default;

void SplitStepSolver::diffuse(std::vector<double>& u, double dt) const {
  if (!diffusion_) return;
  thread_local std::vector<std::complex<double>> spec;
  spec.resize(plans_->symbol.size());
  auto* c = reinterpret_cast<fftw_complex*>(spec.data());
  fftw_execute_dft_r2c(plans_->forward, u.data(), c);
  const double inv_n = 1.0 / static_cast<double>(grid_.n_space);
  for (std::size_t m = 0; m < spec.size(); ++m) {
    spec[m] *= std::exp(-0.5 * kStableScale * dt * plans_->symbol[m]) * inv_n;
  }
  fftw_execute_dft_c2r(plans_->backward, c, u.data());
}

void SplitStepSolver::step(FieldState& state, const double* noise_row, double dt) const {
  if (state.values.size() != grid_.n_space) throw DomainError("field state does not match the grid");
  diffuse(state.values, dt);
  if (noise_row) {
    for (std::size_t j = 0; j < state.values.size(); ++j) state.values[j] *= std::exp(noise_row[j] * dt);
  }
  diffuse(state.values, dt);
  state.time += dt;
}

FieldState SplitStepSolver::initial_state(const InitialCondition& u0) const {
  FieldState s;
  s.values.resize(grid_.n_space);
  for (std::size_t j = 0; j < grid_.n_space; ++j) s.values[j] = u0(grid_.x(j));
  return s;
}

FieldState step(const SplitStepSolver& solver, FieldState state, const double* noise_row, double dt) {
  solver.step(state, noise_row, dt);
  return state;
}

namespace {

void require_line(const ModelParams& params) {
  params.validate();
  if (params.d != 1) throw RegimeError(regime::kStratonovichNeedsD1, "the direct solver is implemented for d = 1");
}

}  // namespace

std::vector<FieldState> solve_realization(const TorusGrid& grid, const ModelParams& params, double epsilon,
                                          RngStream& rng, std::size_t snapshot_every) {
  require_line(params);
  TorusGrid g = grid;
  g.center = params.x_point[0];
  const NoiseSlabSampler noise(g, epsilon);
  const SplitStepSolver solver(g, params.alpha);
  const Eigen::MatrixXd slab = noise.sample(rng);
  // Row-major copy so each time row is contiguous.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = slab;
  FieldState state = solver.initial_state(params.u0);
  std::vector<FieldState> out{state};
  for (std::size_t i = 0; i < g.n_time; ++i) {
    solver.step(state, rows.row(static_cast<Eigen::Index>(i)).data(), g.dt());
    if ((snapshot_every && (i + 1) % snapshot_every == 0) || i + 1 == g.n_time) out.push_back(state);
  }
  return out;
}

MomentEstimate ensemble_moment(const TorusGrid& grid, const ModelParams& params, double epsilon, int p,
                               std::size_t n_realizations, std::uint64_t seed, unsigned workers) {
  require_line(params);
  if (p < 1) throw DomainError("moment order p must be a positive integer");
  if (n_realizations < 1) throw DomainError("need at least one realization");
  if (std::abs(grid.t_horizon - params.t_horizon) > 1e-12 * params.t_horizon) {
    throw DomainError("solver grid must end at the model horizon");
  }
  TorusGrid g = grid;
  g.center = params.x_point[0];
  const NoiseSlabSampler noise(g, epsilon);
  const SplitStepSolver solver(g, params.alpha);
  std::vector<double> values(n_realizations);
  parallel_for(n_realizations, workers, [&](std::size_t r) {
    RngStream rng(seed, r);
    const Eigen::MatrixXd slab = noise.sample(rng);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = slab;
    FieldState state = solver.initial_state(params.u0);
    for (std::size_t i = 0; i < g.n_time; ++i) solver.step(state, rows.row(static_cast<Eigen::Index>(i)).data(), g.dt());
    values[r] = std::pow(state.values[g.center_index()], p);
  });
  const auto stats = sample_stats(values);
  MomentEstimate e;
  e.value = stats.mean;
  e.std_error = stats.std_error;
  e.n_samples = n_realizations;
  e.p_order = p;
  e.flavor = Flavor::stratonovich;
  e.seed = seed;
  e.grid_steps = g.n_time;
  return e;
}

void write_snapshots_csv(std::ostream& os, const TorusGrid& grid, const std::vector<FieldState>& states) {
  csv::write_header(os, {"time", "x", "u"});
  for (const auto& s : states) {
    for (std::size_t j = 0; j < s.values.size(); ++j) csv::write_row(os, {s.time, grid.x(j), s.values[j]});
  }
}

}  // namespace fracheat
