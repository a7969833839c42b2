#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracheat {

/// Heat kernel p_t(x) = (2 pi t)^{-d/2} exp(-|x|^2 / (2t)), d = x.size().
/// Throws DomainError for t <= 0: the noise covariance is singular on the
/// time diagonal and must never be sampled there.
double heat_kernel(double t, std::span<const double> x);
double heat_kernel(double t, double x);
/// Same, from the squared norm r2 = |x|^2.
double heat_kernel_r2(double t, double r2, int d);

/// Fourier transform exp(-t |xi|^2 / 2) with F f(xi) = int f(x) e^{-i xi.x} dx.
double heat_kernel_ft(double t, std::span<const double> xi);

/// Fourier transform of the alpha-stable density: exp(-t |xi|^alpha / 2).
double stable_kernel_ft(double alpha, double t, std::span<const double> xi);

/// int_{R^d} exp(-|xi|^alpha) dxi = 2 pi^{d/2} Gamma(d/alpha) / (alpha Gamma(d/2)).
double stable_ft_mass(double alpha, int d);

/// Constant C(alpha, d) in int |F g_alpha(t, .)|^p dxi = C p^{-d/alpha} t^{-d/alpha}.
double stable_ft_power_constant(double alpha, int d);

/// Density g_alpha(t, x) of the isotropic alpha-stable law with characteristic
/// function exp(-t |xi|^alpha / 2). Closed forms for alpha = 2 (heat kernel) and
/// alpha = 1, d = 1 (Cauchy with scale t/2); otherwise radial Fourier inversion
/// by panel-wise tanh-sinh quadrature, absolute error target 1e-8.
double stable_kernel(double alpha, double t, std::span<const double> x);
double stable_kernel(double alpha, double t, double x);

/// Piecewise-constant function on a tensor grid in (time, space). Cell (i, j)
/// is [time_edges[i], time_edges[i+1]) x prod_k [space_edges[k][j_k], space_edges[k][j_k+1]).
/// Values are stored time-major, then space in row-major order over dimensions.
class GridFunction {
 public:
  GridFunction(std::vector<double> time_edges, std::vector<std::vector<double>> space_edges,
               std::vector<double> values);

  /// Single-cell indicator-like bump `value * 1_{[t0,t1) x [x0,x1)}` in d = 1.
  static GridFunction box(double t0, double t1, double x0, double x1, double value = 1.0);

  int dimension() const noexcept { return static_cast<int>(space_edges_.size()); }
  std::size_t time_cells() const noexcept { return time_edges_.size() - 1; }
  std::size_t space_cells() const noexcept { return space_cells_; }
  const std::vector<double>& time_edges() const noexcept { return time_edges_; }
  const std::vector<std::vector<double>>& space_edges() const noexcept { return space_edges_; }
  double value(std::size_t time_cell, std::size_t space_cell) const {
    return values_[time_cell * space_cells_ + space_cell];
  }
  /// Lower/upper corner of a flattened space cell along dimension k.
  double space_lower(std::size_t space_cell, int k) const;
  double space_upper(std::size_t space_cell, int k) const;

  GridFunction operator+(const GridFunction& other) const;
  GridFunction operator*(double scale) const;

 private:
  std::vector<double> time_edges_;
  std::vector<std::vector<double>> space_edges_;
  std::vector<double> values_;
  std::size_t space_cells_ = 1;
};

/// <f, g>_H = int f(s,x) g(t,y) p_{|t-s|}(x-y) dx dy ds dt, evaluated in physical
/// space: the spatial integrals are exact (Gaussian CDF antiderivatives) and the
/// remaining lag integral uses tanh-sinh per linear piece of the lag weight.
double h_inner_product(const GridFunction& f, const GridFunction& g);

/// Fourier-side evaluation (2 pi)^{-1} int F f(s,.)(xi) conj(F g(t,.)(xi)) e^{-|t-s| xi^2/2}
/// dxi ds dt with exact time integration. d = 1 only.
double h_inner_product_fourier(const GridFunction& f, const GridFunction& g);

namespace detail {

/// Piece of a piecewise-linear weight on [lo, hi] subset of [0, inf): w(u) = a + b u.
struct LinearPiece {
  double lo;
  double hi;
  double a;
  double b;
};

/// Folded lag weight of two intervals: for tau = r - s with s in [a0,a1], r in [b0,b1],
/// returns pieces of W(u) = w(u) + w(-u), u >= 0, where w is the length of
/// {s : s in [a0,a1], s + tau in [b0,b1]}. Then int int h(|r-s|) = int W(u) h(u) du.
std::vector<LinearPiece> folded_lag_weight(double a0, double a1, double b0, double b1);

/// Antiderivatives from 0 (d = 1): A0(tau) = int_0^tau p_u(z) du and
/// A1(tau) = int_0^tau u p_u(z) du, with a = |z|.
double heat_time_antiderivative0(double tau, double a);
double heat_time_antiderivative1(double tau, double a);

}  // namespace detail

}  // namespace fracheat
