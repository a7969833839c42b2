#include "fracheat/exponent.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracheat/errors.hpp"

namespace fracheat {

namespace {

constexpr double kPi = std::numbers::pi;

// Midpoint-interpolated positions, n x d.
void cell_positions(std::span<const double> x, std::size_t n, int d, std::vector<double>& out) {
  const auto ud = static_cast<std::size_t>(d);
  if (x.size() != (n + 1) * ud) throw DomainError("path does not match the quadrature grid");
  out.resize(n * ud);
  for (std::size_t i = 0; i < n * ud; ++i) out[i] = 0.5 * (x[i] + x[i + ud]);
}

double dist2(const double* a, const double* b, int d) {
  double r2 = 0.0;
  for (int k = 0; k < d; ++k) {
    const double v = a[k] - b[k];
    r2 += v * v;
  }
  return r2;
}

// int over a folded lag piece of (a + b u) p_{u + c}(z), d = 1.
double piece_heat_integral(const detail::LinearPiece& pc, double c, double z) {
  using detail::heat_time_antiderivative0;
  using detail::heat_time_antiderivative1;
  const double lo = pc.lo + c;
  const double hi = pc.hi + c;
  return (pc.a - pc.b * c) * (heat_time_antiderivative0(hi, z) - heat_time_antiderivative0(lo, z)) +
         pc.b * (heat_time_antiderivative1(hi, z) - heat_time_antiderivative1(lo, z));
}

std::vector<double> subsample(std::span<const double> x, const std::vector<std::size_t>& idx, int d) {
  std::vector<double> out;
  out.reserve(idx.size() * static_cast<std::size_t>(d));
  for (auto i : idx) {
    for (int k = 0; k < d; ++k) out.push_back(x[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(k)]);
  }
  return out;
}

TimeGrid coarse_grid(const TimeGrid& grid, const std::vector<std::size_t>& idx) {
  std::vector<double> t;
  t.reserve(idx.size());
  for (auto i : idx) t.push_back(grid.time(i));
  return TimeGrid::from_times(std::move(t));
}

}  // namespace

void MollifierParams::validate() const {
  if (!(epsilon > 0.0) || !(delta > 0.0) || !std::isfinite(epsilon) || !std::isfinite(delta)) {
    throw DomainError("mollifier scales epsilon and delta must be positive");
  }
}

std::vector<std::size_t> coarse_indices(std::size_t n_steps) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < n_steps; i += 2) idx.push_back(i);
  idx.push_back(n_steps);
  return idx;
}

ExponentQuadrature::ExponentQuadrature(TimeGrid grid, int d, int band)
    : grid_(std::move(grid)), d_(d), band_(d == 1 ? std::max(band, 0) : 0), n_(grid_.n_steps()) {
  if (d < 1) throw DomainError("dimension must be >= 1");
  h_.resize(n_);
  std::vector<double> mid(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    h_[i] = grid_.step(i);
    mid[i] = 0.5 * (grid_.time(i) + grid_.time(i + 1));
  }
  const auto ub = static_cast<std::size_t>(band_);
  row_start_.resize(n_ + 1);
  for (std::size_t i = 0; i < n_; ++i) {
    row_start_[i] = coef_.size();
    for (std::size_t j = i + ub + 1; j < n_; ++j) {
      const double tau = mid[j] - mid[i];
      coef_.push_back(h_[i] * h_[j] * std::pow(2.0 * kPi * tau, -0.5 * d_));
      q_.push_back(0.5 / tau);
    }
  }
  row_start_[n_] = coef_.size();
  if (d_ == 1) {
    band_start_.resize(n_ * (ub + 1) + 1);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k <= ub; ++k) {
        band_start_[i * (ub + 1) + k] = band_pieces_.size();
        const std::size_t j = i + k;
        if (j >= n_) continue;
        for (const auto& pc : detail::folded_lag_weight(grid_.time(i), grid_.time(i + 1), grid_.time(j),
                                                        grid_.time(j + 1))) {
          band_pieces_.push_back(pc);
        }
      }
    }
    band_start_.back() = band_pieces_.size();
  }
}

double ExponentQuadrature::accumulate(std::span<const double> x, std::span<const double> y, bool same) const {
  thread_local std::vector<double> xa;
  thread_local std::vector<double> yb;
  cell_positions(x, n_, d_, xa);
  if (!same) cell_positions(y, n_, d_, yb);
  const double* X = xa.data();
  const double* Y = same ? xa.data() : yb.data();
  const int d = d_;
  const auto ud = static_cast<std::size_t>(d);
  const auto ub = static_cast<std::size_t>(band_);

  double far = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t begin = row_start_[i];
    const std::size_t end = row_start_[i + 1];
    const std::size_t j0 = i + ub + 1;
    double row = 0.0;
    if (d == 1) {
      const double xi = X[i];
      const double yi = Y[i];
      if (same) {
        for (std::size_t c = begin, j = j0; c < end; ++c, ++j) {
          const double u = xi - X[j];
          row += 2.0 * coef_[c] * std::exp(-q_[c] * u * u);
        }
      } else {
        for (std::size_t c = begin, j = j0; c < end; ++c, ++j) {
          const double u = xi - Y[j];
          const double v = X[j] - yi;
          row += coef_[c] * (std::exp(-q_[c] * u * u) + std::exp(-q_[c] * v * v));
        }
      }
    } else {
      for (std::size_t c = begin, j = j0; c < end; ++c, ++j) {
        const double r1 = dist2(X + i * ud, Y + j * ud, d);
        if (same) {
          row += 2.0 * coef_[c] * std::exp(-q_[c] * r1);
        } else {
          const double r2 = dist2(X + j * ud, Y + i * ud, d);
          row += coef_[c] * (std::exp(-q_[c] * r1) + std::exp(-q_[c] * r2));
        }
      }
    }
    far += row;
  }

  double near = 0.0;
  if (d == 1) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k <= ub && i + k < n_; ++k) {
        const std::size_t j = i + k;
        const std::size_t b0 = band_start_[i * (ub + 1) + k];
        const std::size_t b1 = band_start_[i * (ub + 1) + k + 1];
        auto cell = [&](double z) {
          double v = 0.0;
          for (std::size_t p = b0; p < b1; ++p) v += piece_heat_integral(band_pieces_[p], 0.0, z);
          return v;
        };
        if (k == 0) {
          near += cell(X[i] - Y[i]);
        } else if (same) {
          near += 2.0 * cell(X[i] - X[j]);
        } else {
          near += cell(X[i] - Y[j]) + cell(X[j] - Y[i]);
        }
      }
    }
  } else {
    for (std::size_t i = 0; i < n_; ++i) {
      near += h_[i] * h_[i] * heat_kernel_r2(h_[i] / 3.0, dist2(X + i * ud, Y + i * ud, d), d);
    }
  }
  return far + near;
}

double ExponentQuadrature::self(std::span<const double> x) const { return accumulate(x, x, true); }

double ExponentQuadrature::cross(std::span<const double> x, std::span<const double> y) const {
  return accumulate(x, y, false);
}

MollifiedQuadrature::MollifiedQuadrature(TimeGrid grid, int d, MollifierParams moll)
    : grid_(std::move(grid)), d_(d), moll_(moll), n_(grid_.n_steps()) {
  moll_.validate();
  if (d < 1) throw DomainError("dimension must be >= 1");
  const double t = grid_.horizon();
  h_.resize(n_);
  std::vector<double> mid(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    h_[i] = grid_.step(i);
    mid[i] = 0.5 * (grid_.time(i) + grid_.time(i + 1));
  }
  cell_start_.reserve(n_ * (n_ + 1) / 2 + 1);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i; j < n_; ++j) {
      cell_start_.push_back(pieces_.size());
      for (const auto& pc : detail::folded_lag_weight(mid[i], std::min(mid[i] + moll_.delta, t), mid[j],
                                                      std::min(mid[j] + moll_.delta, t))) {
        pieces_.push_back(pc);
      }
    }
  }
  cell_start_.push_back(pieces_.size());
}

double MollifiedQuadrature::window(std::size_t cell, double z2) const {
  const double c = 2.0 * moll_.epsilon;
  double v = 0.0;
  if (d_ == 1) {
    const double z = std::sqrt(z2);
    for (std::size_t p = cell_start_[cell]; p < cell_start_[cell + 1]; ++p) v += piece_heat_integral(pieces_[p], c, z);
  } else {
    using GL = boost::math::quadrature::gauss<double, 10>;
    for (std::size_t p = cell_start_[cell]; p < cell_start_[cell + 1]; ++p) {
      const auto& pc = pieces_[p];
      v += GL::integrate([&](double u) { return (pc.a + pc.b * u) * heat_kernel_r2(u + c, z2, d_); }, pc.lo, pc.hi);
    }
  }
  return v / (moll_.delta * moll_.delta);
}

double MollifiedQuadrature::inner(std::span<const double> x, std::span<const double> y) const {
  thread_local std::vector<double> xa;
  thread_local std::vector<double> yb;
  cell_positions(x, n_, d_, xa);
  cell_positions(y, n_, d_, yb);
  const auto ud = static_cast<std::size_t>(d_);
  double total = 0.0;
  std::size_t cell = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t j = i; j < n_; ++j, ++cell) {
      const double w = h_[i] * h_[j];
      row += w * window(cell, dist2(xa.data() + i * ud, yb.data() + j * ud, d_));
      if (j != i) row += w * window(cell, dist2(xa.data() + j * ud, yb.data() + i * ud, d_));
    }
    total += row;
  }
  return total;
}

namespace {

ExponentValue exponent_with_estimate(const Path& a, const Path* b, int d) {
  if (a.positions.empty() || a.size() < 2) throw DomainError("empty path");
  if (a.d != d || (b && b->d != d)) throw DomainError("path dimension does not match d");
  if (b && !(a.grid == b->grid)) throw DomainError("paths must share a time grid");
  ExponentValue out;
  out.grid_steps = a.grid.n_steps();
  out.divergent = d >= 2;
  ExponentQuadrature fine(a.grid, d);
  out.value = b ? fine.cross(a.positions, b->positions) : fine.self(a.positions);
  if (a.grid.n_steps() >= 2) {
    const auto idx = coarse_indices(a.grid.n_steps());
    ExponentQuadrature coarse(coarse_grid(a.grid, idx), d);
    const auto ca = subsample(a.positions, idx, d);
    const double vc = b ? coarse.cross(ca, subsample(b->positions, idx, d)) : coarse.self(ca);
    out.refinement_estimate = std::abs(out.value - vc);
  } else {
    out.refinement_estimate = std::abs(out.value);
  }
  return out;
}

}  // namespace

ExponentValue self_exponent(const Path& path, int d) { return exponent_with_estimate(path, nullptr, d); }

ExponentValue cross_exponent(const Path& a, const Path& b, int d) { return exponent_with_estimate(a, &b, d); }

double mollified_inner(const Path& a, const Path& b, MollifierParams moll, int d) {
  if (a.d != d || b.d != d) throw DomainError("path dimension does not match d");
  if (!(a.grid == b.grid)) throw DomainError("paths must share a time grid");
  return MollifiedQuadrature(a.grid, d, moll).inner(a.positions, b.positions);
}

DeterministicBound deterministic_bound(double t, int d) {
  if (!(t > 0.0)) throw DomainError("deterministic bound needs t > 0");
  if (d != 1) return {false, std::numeric_limits<double>::infinity()};
  return {true, 8.0 / 3.0 / std::sqrt(2.0 * kPi) * std::pow(t, 1.5)};
}

}  // namespace fracheat
