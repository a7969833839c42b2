#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "fracheat/rng.hpp"

namespace fracheat {

inline constexpr int kDefaultStepsPerUnitTime = 256;

/// Strictly increasing times 0 = t_0 < ... < t_n. Copies share storage.
class TimeGrid {
 public:
  /// Single step on [0, 1].
  TimeGrid() : TimeGrid(std::vector<double>{0.0, 1.0}) {}
  /// n steps of equal size on [0, t].
  static TimeGrid uniform(double t, std::size_t n_steps);
  /// Uniform grid with round(steps_per_unit * t) steps (at least one).
  static TimeGrid with_density(double t, int steps_per_unit = kDefaultStepsPerUnitTime);
  static TimeGrid from_times(std::vector<double> times);

  std::size_t n_steps() const noexcept { return times_->size() - 1; }
  double horizon() const noexcept { return times_->back(); }
  double max_step() const noexcept { return max_step_; }
  double time(std::size_t i) const { return (*times_)[i]; }
  double step(std::size_t i) const { return (*times_)[i + 1] - (*times_)[i]; }
  const std::vector<double>& times() const noexcept { return *times_; }
  bool is_uniform() const noexcept { return uniform_; }

  /// Grid with every other node removed (requires an even step count).
  TimeGrid coarsened() const;
  /// Grid with all midpoints inserted.
  TimeGrid refined() const;

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.times_ == b.times_ || *a.times_ == *b.times_;
  }

 private:
  explicit TimeGrid(std::vector<double> times);
  std::shared_ptr<const std::vector<double>> times_;
  double max_step_ = 0.0;
  bool uniform_ = false;
};

/// Positions X_{t_i} + x0 for i = 0..n, stored row-major (n+1) x d.
struct Path {
  TimeGrid grid;
  int d = 1;
  std::vector<double> positions;

  std::size_t size() const noexcept { return grid.n_steps() + 1; }
  std::span<const double> at(std::size_t i) const {
    return {positions.data() + i * static_cast<std::size_t>(d), static_cast<std::size_t>(d)};
  }
  std::span<const double> start() const { return at(0); }
  std::span<const double> end() const { return at(size() - 1); }
};

/// Positive (alpha/2)-stable variate S with E exp(-lambda S) = exp(-(dt/2) lambda^{alpha/2}),
/// by the Chambers-Mallows-Stuck (Kanter) representation. alpha = 2 must be handled
/// by the caller (the subordinator degenerates to dt/2).
double sample_subordinator_increment(double alpha, double dt, RngStream& rng);

/// Isotropic increment with characteristic function exp(-dt |xi|^alpha / 2), written to out (size d).
void sample_increment(double alpha, double dt, RngStream& rng, std::span<double> out);
std::vector<double> sample_increment(double alpha, int d, double dt, RngStream& rng);

/// Cumulative sum of independent increments over the grid, shifted by x0 (size d).
Path sample_path(double alpha, int d, const TimeGrid& grid, std::span<const double> x0, RngStream& rng);
/// Reuses `out`'s storage.
void sample_path_into(double alpha, int d, const TimeGrid& grid, std::span<const double> x0, RngStream& rng,
                      Path& out);

/// CSV with columns time, x_1..x_d.
void write_path_csv(std::ostream& os, const Path& path);

}  // namespace fracheat
