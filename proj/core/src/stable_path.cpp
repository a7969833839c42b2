#include "fracheat/stable_path.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fracheat/csv.hpp"
#include "fracheat/errors.hpp"
#include "fracheat/model.hpp"

namespace fracheat {

TimeGrid::TimeGrid(std::vector<double> times) {
  if (times.size() < 2) throw DomainError("time grid needs at least one step");
  if (times.front() != 0.0) throw DomainError("time grid must start at 0");
  double min_step = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double h = times[i] - times[i - 1];
    if (!(h > 0.0) || !std::isfinite(times[i])) throw DomainError("time grid must be strictly increasing");
    max_step_ = std::max(max_step_, h);
    min_step = std::min(min_step, h);
  }
  uniform_ = (max_step_ - min_step) <= 1e-12 * max_step_;
  times_ = std::make_shared<const std::vector<double>>(std::move(times));
}

TimeGrid TimeGrid::uniform(double t, std::size_t n_steps) {
  if (!(t > 0.0) || n_steps == 0) throw DomainError("uniform grid needs t > 0 and n >= 1");
  std::vector<double> times(n_steps + 1);
  for (std::size_t i = 0; i <= n_steps; ++i) times[i] = t * static_cast<double>(i) / static_cast<double>(n_steps);
  times.back() = t;
  return TimeGrid(std::move(times));
}

TimeGrid TimeGrid::with_density(double t, int steps_per_unit) {
  if (steps_per_unit < 1) throw DomainError("steps per unit time must be positive");
  const auto n = static_cast<std::size_t>(std::max(1.0, std::round(t * steps_per_unit)));
  return uniform(t, n);
}

TimeGrid TimeGrid::from_times(std::vector<double> times) { return TimeGrid(std::move(times)); }

TimeGrid TimeGrid::coarsened() const {
  if (n_steps() % 2 != 0) throw DomainError("coarsening needs an even number of steps");
  std::vector<double> t;
  t.reserve(n_steps() / 2 + 1);
  for (std::size_t i = 0; i < times_->size(); i += 2) t.push_back((*times_)[i]);
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::refined() const {
  std::vector<double> t;
  t.reserve(2 * n_steps() + 1);
  for (std::size_t i = 0; i < n_steps(); ++i) {
    t.push_back(time(i));
    t.push_back(0.5 * (time(i) + time(i + 1)));
  }
  t.push_back(horizon());
  return TimeGrid(std::move(t));
}

double sample_subordinator_increment(double alpha, double dt, RngStream& rng) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("subordinator needs alpha in (0, 2)");
  if (!(dt > 0.0)) throw DomainError("subordinator increment needs dt > 0");
  const double beta = 0.5 * alpha;
  const double u = std::numbers::pi * rng.uniform();
  const double e = rng.exponential();
  const double log_s1 = std::log(std::sin(beta * u)) - std::log(std::sin(u)) / beta +
                        (1.0 - beta) / beta * (std::log(std::sin((1.0 - beta) * u)) - std::log(e));
  return std::pow(kStableScale * dt, 1.0 / beta) * std::exp(log_s1);
}

void sample_increment(double alpha, double dt, RngStream& rng, std::span<double> out) {
  if (dt < 0.0) throw DomainError("increment needs dt >= 0");
  if (dt == 0.0) {
    for (double& v : out) v = 0.0;
    return;
  }
  const double scale = alpha == 2.0 ? std::sqrt(dt) : std::sqrt(2.0 * sample_subordinator_increment(alpha, dt, rng));
  for (double& v : out) v = scale * rng.normal();
}

std::vector<double> sample_increment(double alpha, int d, double dt, RngStream& rng) {
  std::vector<double> out(static_cast<std::size_t>(d));
  sample_increment(alpha, dt, rng, out);
  return out;
}

void sample_path_into(double alpha, int d, const TimeGrid& grid, std::span<const double> x0, RngStream& rng,
                      Path& out) {
  if (x0.size() != static_cast<std::size_t>(d)) throw DomainError("path start must have d coordinates");
  out.grid = grid;
  out.d = d;
  const std::size_t ud = static_cast<std::size_t>(d);
  out.positions.resize((grid.n_steps() + 1) * ud);
  std::copy(x0.begin(), x0.end(), out.positions.begin());
  for (std::size_t i = 0; i < grid.n_steps(); ++i) {
    std::span<double> next(out.positions.data() + (i + 1) * ud, ud);
    sample_increment(alpha, grid.step(i), rng, next);
    for (std::size_t k = 0; k < ud; ++k) next[k] += out.positions[i * ud + k];
  }
}

Path sample_path(double alpha, int d, const TimeGrid& grid, std::span<const double> x0, RngStream& rng) {
  Path p{grid, d, {}};
  sample_path_into(alpha, d, grid, x0, rng, p);
  return p;
}

void write_path_csv(std::ostream& os, const Path& path) {
  std::vector<std::string> cols{"time"};
  for (int k = 1; k <= path.d; ++k) cols.push_back("x_" + std::to_string(k));
  csv::write_header(os, cols);
  std::vector<double> row(static_cast<std::size_t>(path.d) + 1);
  for (std::size_t i = 0; i < path.size(); ++i) {
    row[0] = path.grid.time(i);
    const auto x = path.at(i);
    std::copy(x.begin(), x.end(), row.begin() + 1);
    csv::write_row(os, row);
  }
}

}  // namespace fracheat
