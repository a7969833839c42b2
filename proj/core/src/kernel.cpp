#include "fracheat/kernel.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/model.hpp"

namespace fracheat {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive_time(double t) {
  if (!(t > 0.0)) throw DomainError("kernel evaluated at non-positive time");
}

double norm2(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return r2;
}

// Radial inversion for d >= 2:
// g(r) = (2 pi)^{-d/2} r^{1-d/2} int_0^inf k^{d/2} J_{d/2-1}(r k) exp(-c t k^alpha) dk.
double stable_kernel_radial(double alpha, double t, double r, int d) {
  const double cutoff = std::pow(80.0 / (kStableScale * t), 1.0 / alpha);
  const double nu = 0.5 * d - 1.0;
  auto f = [&](double k) {
    return std::pow(k, 0.5 * d) * boost::math::cyl_bessel_j(nu, r * k) *
           std::exp(-kStableScale * t * std::pow(k, alpha));
  };
  const double width = kPi / r;
  const auto panels = static_cast<std::size_t>(std::ceil(cutoff / width));
  if (panels > 200000) throw BudgetError("stable density inversion needs too many panels");
  boost::math::quadrature::tanh_sinh<double> ts;
  double sum = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = width * static_cast<double>(i);
    const double hi = std::min(cutoff, lo + width);
    sum += ts.integrate(f, lo, hi, 1e-12);
  }
  return std::pow(2.0 * kPi, -0.5 * d) * std::pow(r, 1.0 - 0.5 * d) * sum;
}

double stable_kernel_line(double alpha, double t, double r) {
  // (1/pi) int_0^inf cos(r k) exp(-c t k^alpha) dk
  auto f = [&](double k) { return std::exp(-kStableScale * t * std::pow(k, alpha)); };
  thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator(1e-11, 10);
  const auto [value, err] = integrator.integrate(f, r);
  (void)err;
  return value / kPi;
}

// P2(z) = z Phi(z/sigma) + sigma phi(z/sigma), an antiderivative of Phi(z/sigma).
double gauss_p2(double z, double sigma) {
  if (sigma == 0.0) return std::max(z, 0.0);
  const double u = z / sigma;
  const double cdf = 0.5 * std::erfc(-u / std::numbers::sqrt2);
  const double pdf = std::exp(-0.5 * u * u) / std::sqrt(2.0 * kPi);
  return z * cdf + sigma * pdf;
}

// int_a^b int_c^e p_tau(x - y) dy dx in one dimension.
double interval_pair_mass(double a, double b, double c, double e, double tau) {
  const double s = std::sqrt(tau);
  return gauss_p2(b - c, s) - gauss_p2(a - c, s) - gauss_p2(b - e, s) + gauss_p2(a - e, s);
}

double sinc(double u) {
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

// int_0^L exp(-lambda v) dv and int_0^L v exp(-lambda v) dv.
std::pair<double, double> exp_moments(double lambda, double len) {
  const double x = lambda * len;
  if (x < 1e-3) {
    const double m0 = len * (1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0);
    const double m1 = len * len * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0);
    return {m0, m1};
  }
  const double m0 = -std::expm1(-x) / lambda;
  const double m1 = (-std::expm1(-x) - x * std::exp(-x)) / (lambda * lambda);
  return {m0, m1};
}

}  // namespace

double heat_kernel_r2(double t, double r2, int d) {
  require_positive_time(t);
  return std::pow(2.0 * kPi * t, -0.5 * d) * std::exp(-r2 / (2.0 * t));
}

double heat_kernel(double t, std::span<const double> x) {
  if (x.empty()) throw DomainError("heat kernel needs d >= 1");
  return heat_kernel_r2(t, norm2(x), static_cast<int>(x.size()));
}

double heat_kernel(double t, double x) { return heat_kernel_r2(t, x * x, 1); }

double heat_kernel_ft(double t, std::span<const double> xi) {
  if (t < 0.0) throw DomainError("heat kernel transform needs t >= 0");
  return std::exp(-0.5 * t * norm2(xi));
}

double stable_kernel_ft(double alpha, double t, std::span<const double> xi) {
  if (t < 0.0) throw DomainError("stable kernel transform needs t >= 0");
  if (alpha == 2.0) return heat_kernel_ft(t, xi);
  return std::exp(-kStableScale * t * std::pow(std::sqrt(norm2(xi)), alpha));
}

double stable_ft_mass(double alpha, int d) {
  const double h = 0.5 * d;
  return 2.0 * std::pow(kPi, h) * std::tgamma(d / alpha) / (alpha * std::tgamma(h));
}

double stable_ft_power_constant(double alpha, int d) {
  // int exp(-p t |xi|^alpha / 2) dxi = mass * (p t / 2)^{-d/alpha}
  return stable_ft_mass(alpha, d) * std::pow(2.0, d / alpha);
}

double stable_kernel(double alpha, double t, std::span<const double> x) {
  require_positive_time(t);
  if (x.empty()) throw DomainError("stable kernel needs d >= 1");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
  const int d = static_cast<int>(x.size());
  const double r2 = norm2(x);
  if (alpha == 2.0) return heat_kernel_r2(t, r2, d);
  const double scale = kStableScale * t;
  if (alpha == 1.0) {
    // Multivariate Cauchy with scale c t.
    const double h = 0.5 * (d + 1);
    return std::tgamma(h) / std::pow(kPi, h) * scale / std::pow(scale * scale + r2, h);
  }
  if (r2 == 0.0) {
    return std::pow(2.0 * kPi, -d) * stable_ft_mass(alpha, d) * std::pow(scale, -d / alpha);
  }
  const double r = std::sqrt(r2);
  if (d == 1) return stable_kernel_line(alpha, t, r);
  return stable_kernel_radial(alpha, t, r, d);
}

double stable_kernel(double alpha, double t, double x) {
  return stable_kernel(alpha, t, std::span<const double>(&x, 1));
}

GridFunction::GridFunction(std::vector<double> time_edges, std::vector<std::vector<double>> space_edges,
                           std::vector<double> values)
    : time_edges_(std::move(time_edges)), space_edges_(std::move(space_edges)), values_(std::move(values)) {
  auto check_edges = [](const std::vector<double>& e) {
    if (e.size() < 2) throw DomainError("grid function needs at least one cell per axis");
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (!std::isfinite(e[i])) throw DomainError("grid function support must be bounded");
      if (i > 0 && !(e[i] > e[i - 1])) throw DomainError("grid edges must be strictly increasing");
    }
  };
  check_edges(time_edges_);
  if (time_edges_.front() < 0.0) throw DomainError("grid function time support must start at t >= 0");
  if (space_edges_.empty()) throw DomainError("grid function needs d >= 1");
  for (const auto& e : space_edges_) {
    check_edges(e);
    space_cells_ *= e.size() - 1;
  }
  if (values_.size() != time_cells() * space_cells_) {
    throw DomainError("grid function value count does not match the grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("grid function values must be finite");
  }
}

GridFunction GridFunction::box(double t0, double t1, double x0, double x1, double value) {
  return GridFunction({t0, t1}, {{x0, x1}}, {value});
}

double GridFunction::space_lower(std::size_t space_cell, int k) const {
  std::size_t idx = space_cell;
  for (int j = dimension() - 1; j > k; --j) idx /= space_edges_[j].size() - 1;
  return space_edges_[k][idx % (space_edges_[k].size() - 1)];
}

double GridFunction::space_upper(std::size_t space_cell, int k) const {
  std::size_t idx = space_cell;
  for (int j = dimension() - 1; j > k; --j) idx /= space_edges_[j].size() - 1;
  return space_edges_[k][idx % (space_edges_[k].size() - 1) + 1];
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  if (time_edges_ != other.time_edges_ || space_edges_ != other.space_edges_) {
    throw DomainError("grid functions on different grids cannot be added");
  }
  auto v = values_;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return GridFunction(time_edges_, space_edges_, std::move(v));
}

GridFunction GridFunction::operator*(double scale) const {
  auto v = values_;
  for (double& x : v) x *= scale;
  return GridFunction(time_edges_, space_edges_, std::move(v));
}

namespace detail {

std::vector<LinearPiece> folded_lag_weight(double a0, double a1, double b0, double b1) {
  auto w = [&](double tau) { return std::max(0.0, std::min(a1, b1 - tau) - std::max(a0, b0 - tau)); };
  auto W = [&](double u) { return w(u) + w(-u); };
  std::vector<double> knots{0.0};
  for (double k : {b0 - a1, b0 - a0, b1 - a1, b1 - a0}) {
    if (k > 0.0) knots.push_back(k);
    if (-k > 0.0) knots.push_back(-k);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<LinearPiece> pieces;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double lo = knots[i];
    const double hi = knots[i + 1];
    const double wl = W(lo);
    const double wh = W(hi);
    if (wl == 0.0 && wh == 0.0) continue;
    const double slope = (wh - wl) / (hi - lo);
    pieces.push_back({lo, hi, wl - slope * lo, slope});
  }
  return pieces;
}

double heat_time_antiderivative0(double tau, double a) {
  if (tau <= 0.0) return 0.0;
  a = std::abs(a);
  const double s = std::sqrt(2.0 * tau);
  return std::sqrt(2.0 * tau / kPi) * std::exp(-a * a / (2.0 * tau)) - a * std::erfc(a / s);
}

double heat_time_antiderivative1(double tau, double a) {
  if (tau <= 0.0) return 0.0;
  a = std::abs(a);
  const double s = std::sqrt(2.0 * tau);
  return (2.0 / 3.0) / std::sqrt(2.0 * kPi) * (tau - a * a) * std::sqrt(tau) * std::exp(-a * a / (2.0 * tau)) +
         a * a * a / 3.0 * std::erfc(a / s);
}

}  // namespace detail

double h_inner_product(const GridFunction& f, const GridFunction& g) {
  if (f.dimension() != g.dimension()) throw DomainError("grid functions differ in dimension");
  const int d = f.dimension();
  boost::math::quadrature::tanh_sinh<double> ts;
  double total = 0.0;
  for (std::size_t i = 0; i < f.time_cells(); ++i) {
    for (std::size_t k = 0; k < g.time_cells(); ++k) {
      const auto pieces = detail::folded_lag_weight(f.time_edges()[i], f.time_edges()[i + 1],
                                                    g.time_edges()[k], g.time_edges()[k + 1]);
      for (std::size_t j = 0; j < f.space_cells(); ++j) {
        const double fv = f.value(i, j);
        if (fv == 0.0) continue;
        for (std::size_t l = 0; l < g.space_cells(); ++l) {
          const double gv = g.value(k, l);
          if (gv == 0.0) continue;
          auto space_mass = [&](double tau) {
            double m = 1.0;
            for (int q = 0; q < d; ++q) {
              m *= interval_pair_mass(f.space_lower(j, q), f.space_upper(j, q), g.space_lower(l, q),
                                      g.space_upper(l, q), tau);
            }
            return m;
          };
          double cell = 0.0;
          for (const auto& pc : pieces) {
            cell += ts.integrate([&](double u) { return (pc.a + pc.b * u) * space_mass(u); }, pc.lo, pc.hi, 1e-11);
          }
          total += fv * gv * cell;
        }
      }
    }
  }
  return total;
}

double h_inner_product_fourier(const GridFunction& f, const GridFunction& g) {
  if (f.dimension() != 1 || g.dimension() != 1) {
    throw DomainError("Fourier-side inner product is implemented for d = 1 only");
  }
  struct TimePair {
    std::vector<detail::LinearPiece> pieces;
  };
  std::vector<TimePair> time_pairs;
  for (std::size_t i = 0; i < f.time_cells(); ++i) {
    for (std::size_t k = 0; k < g.time_cells(); ++k) {
      time_pairs.push_back({detail::folded_lag_weight(f.time_edges()[i], f.time_edges()[i + 1],
                                                      g.time_edges()[k], g.time_edges()[k + 1])});
    }
  }
  double span = 0.0;
  double min_width = std::numeric_limits<double>::infinity();
  for (const auto* h : {&f, &g}) {
    const auto& e = h->space_edges()[0];
    span = std::max(span, std::abs(e.back()) + std::abs(e.front()));
    for (std::size_t j = 0; j + 1 < e.size(); ++j) min_width = std::min(min_width, e[j + 1] - e[j]);
  }
  // (1/pi) int_0^inf sum f g h h' sinc sinc cos(xi dm) E(xi) dxi
  auto integrand = [&](double xi) {
    const double lambda = 0.5 * xi * xi;
    double sum = 0.0;
    for (std::size_t i = 0; i < f.time_cells(); ++i) {
      for (std::size_t k = 0; k < g.time_cells(); ++k) {
        double e_time = 0.0;
        for (const auto& pc : time_pairs[i * g.time_cells() + k].pieces) {
          const auto [m0, m1] = exp_moments(lambda, pc.hi - pc.lo);
          e_time += std::exp(-lambda * pc.lo) * ((pc.a + pc.b * pc.lo) * m0 + pc.b * m1);
        }
        if (e_time == 0.0) continue;
        for (std::size_t j = 0; j < f.space_cells(); ++j) {
          const double fv = f.value(i, j);
          if (fv == 0.0) continue;
          const double hj = f.space_upper(j, 0) - f.space_lower(j, 0);
          const double mj = 0.5 * (f.space_upper(j, 0) + f.space_lower(j, 0));
          for (std::size_t l = 0; l < g.space_cells(); ++l) {
            const double gv = g.value(k, l);
            if (gv == 0.0) continue;
            const double hl = g.space_upper(l, 0) - g.space_lower(l, 0);
            const double ml = 0.5 * (g.space_upper(l, 0) + g.space_lower(l, 0));
            sum += fv * gv * hj * hl * sinc(0.5 * xi * hj) * sinc(0.5 * xi * hl) * std::cos(xi * (mj - ml)) * e_time;
          }
        }
      }
    }
    return sum;
  };
  const double cutoff = 400.0 / std::min(1.0, min_width);
  const double width = kPi / std::max(span, 1.0) / 2.0;
  double total = 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  for (double lo = 0.0; lo < cutoff; lo += width) {
    total += GK::integrate(integrand, lo, std::min(cutoff, lo + width), 3, 1e-13);
  }
  return total / kPi;
}

}  // namespace fracheat
