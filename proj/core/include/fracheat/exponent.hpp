#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fracheat/kernel.hpp"
#include "fracheat/stable_path.hpp"

namespace fracheat {

/// Space (epsilon) and time (delta) mollification scales.
struct MollifierParams {
  double epsilon = 0.05;
  double delta = 0.05;
  void validate() const;
};

/// Quadrature value of int_0^t int_0^t p_{|s-r|}(X_s - Y_r) ds dr on a path grid.
struct ExponentValue {
  double value = 0.0;
  std::size_t grid_steps = 0;
  std::string scheme = "midpoint_exact_diagonal";
  /// |V(grid) - V(grid with every other node)|.
  double refinement_estimate = 0.0;
  /// Set for d >= 2, where the limit is infinite and the value is grid dependent.
  bool divergent = false;
};

struct DeterministicBound {
  bool finite = true;
  double value = 0.0;
};

/// Precomputed weights for the double time integral on one grid.
///
/// Cells (i, j) of the product grid are evaluated with the path positions frozen at
/// the cell midpoints (average of the two end nodes). For d = 1, cells with
/// |i - j| <= band are integrated exactly in the lag variable, which removes the
/// |s - r|^{-1/2} singularity; other cells use the midpoint lag. For d >= 2 the time
/// singularity is not integrable: diagonal cells use the mean lag h/3, so the value
/// stays finite on every grid and grows under refinement.
class ExponentQuadrature {
 public:
  ExponentQuadrature(TimeGrid grid, int d, int band = 2);

  const TimeGrid& grid() const noexcept { return grid_; }
  int dimension() const noexcept { return d_; }

  /// Positions are (n+1) x d row-major node values.
  double self(std::span<const double> x) const;
  double cross(std::span<const double> x, std::span<const double> y) const;

 private:
  double accumulate(std::span<const double> x, std::span<const double> y, bool same) const;

  TimeGrid grid_;
  int d_;
  int band_;
  std::size_t n_;
  std::vector<double> h_;
  // Off-band cells i < j: coef = h_i h_j (2 pi tau)^{-d/2}, q = 1 / (2 tau).
  std::vector<std::size_t> row_start_;
  std::vector<double> coef_;
  std::vector<double> q_;
  // Band cells (d = 1): folded lag pieces for (i, i + k), k = 0..band.
  std::vector<std::size_t> band_start_;
  std::vector<detail::LinearPiece> band_pieces_;
};

/// Window-integrated kernel of the mollified noise: for cells (i, j) with midpoints
/// (s, r), delta^{-2} int_s^{min(s+delta,t)} int_r^{min(r+delta,t)} p_{|u-v|+2 eps}(z) du dv,
/// integrated in closed form (d = 1) or by Gauss-Legendre in the lag (d >= 2).
class MollifiedQuadrature {
 public:
  MollifiedQuadrature(TimeGrid grid, int d, MollifierParams moll);

  const TimeGrid& grid() const noexcept { return grid_; }
  double inner(std::span<const double> x, std::span<const double> y) const;

 private:
  double window(std::size_t cell, double z2) const;

  TimeGrid grid_;
  int d_;
  MollifierParams moll_;
  std::size_t n_;
  std::vector<double> h_;
  std::vector<std::size_t> cell_start_;  // (i, j), i <= j, row-major upper triangle
  std::vector<detail::LinearPiece> pieces_;
};

ExponentValue self_exponent(const Path& path, int d);
ExponentValue cross_exponent(const Path& a, const Path& b, int d);
/// <A^{eps,delta}(a), A^{eps,delta}(b)>_H for paths on a common grid.
double mollified_inner(const Path& a, const Path& b, MollifierParams moll, int d);

/// d = 1: int_0^t int_0^t (2 pi |s-r|)^{-1/2} ds dr = (8/3)(2 pi)^{-1/2} t^{3/2}; d >= 2: infinite.
DeterministicBound deterministic_bound(double t, int d);

/// Node positions of a path restricted to every other node (last node always kept),
/// matching TimeGrid-based coarsening used by the refinement estimate.
std::vector<std::size_t> coarse_indices(std::size_t n_steps);

}  // namespace fracheat
