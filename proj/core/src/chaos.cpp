#include "fracheat/chaos.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/random/sobol.hpp>
#include <cmath>
#include <numbers>
#include <numeric>

#include "fracheat/errors.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/rng.hpp"

namespace fracheat {

namespace {

constexpr double kPi = std::numbers::pi;

double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v, double m) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double simplex_volume(int n, double t) { return std::pow(t, 2 * n) / std::tgamma(n + 1.0); }

// (2 pi)^{-nd/2} det(T + C)^{-d/2} for s (sorted or not, paired with r by index).
class GaussianCollapse {
 public:
  GaussianCollapse(int n, int d, double t) : n_(n), d_(d), t_(t), m_(n, n) {}

  double operator()(const double* s, const double* r) {
    for (int j = 0; j < n_; ++j) {
      for (int k = j; k < n_; ++k) {
        const double v = std::min(t_ - s[j], t_ - s[k]) + std::min(t_ - r[j], t_ - r[k]);
        m_(j, k) = v;
        m_(k, j) = v;
      }
      m_(j, j) += std::abs(s[j] - r[j]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m_);
    if (llt.info() != Eigen::Success) return 0.0;
    double log_det = 0.0;
    for (int j = 0; j < n_; ++j) log_det += 2.0 * std::log(llt.matrixLLT()(j, j));
    return std::exp(-0.5 * d_ * (n_ * std::log(2.0 * kPi) + log_det));
  }

 private:
  int n_;
  int d_;
  double t_;
  Eigen::MatrixXd m_;
};

ChaosTerm closed_form_term(int n, int d, double t, const ChaosOptions& opt) {
  const int dim = 2 * n;
  const std::size_t npts = std::max<std::size_t>(opt.qmc_points, 16);
  std::vector<double> pts(npts * static_cast<std::size_t>(dim));
  boost::random::sobol engine(static_cast<std::size_t>(dim));
  const double scale = 1.0 / (static_cast<double>(engine.max()) - static_cast<double>(engine.min()) + 1.0);
  engine.discard(static_cast<std::uintmax_t>(dim));  // skip the origin
  for (auto& x : pts) x = static_cast<double>(engine() - engine.min()) * scale;

  GaussianCollapse f(n, d, t);
  std::vector<double> shift_means;
  std::vector<double> s(static_cast<std::size_t>(n));
  std::vector<double> r(static_cast<std::size_t>(n));
  std::vector<double> shift(static_cast<std::size_t>(dim));
  for (int rep = 0; rep < std::max(opt.qmc_shifts, 2); ++rep) {
    RngStream rng(opt.seed, 0x5155'0000ull + static_cast<std::uint64_t>(rep));
    for (auto& x : shift) x = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < npts; ++i) {
      const double* u = pts.data() + i * static_cast<std::size_t>(dim);
      for (int j = 0; j < n; ++j) {
        double a = u[j] + shift[static_cast<std::size_t>(j)];
        double b = u[n + j] + shift[static_cast<std::size_t>(n + j)];
        s[static_cast<std::size_t>(j)] = t * (a - std::floor(a));
        r[static_cast<std::size_t>(j)] = t * (b - std::floor(b));
      }
      std::sort(s.begin(), s.end());
      acc += f(s.data(), r.data());
    }
    shift_means.push_back(acc / static_cast<double>(npts));
  }
  const double m = mean(shift_means);
  const double vol = simplex_volume(n, t);
  return {n, vol * m, vol * sample_sd(shift_means, m) / std::sqrt(static_cast<double>(shift_means.size())),
          ChaosMethod::closed_form_alpha2};
}

ChaosTerm fourier_term(int n, double alpha, int d, double t, const ChaosOptions& opt) {
  const auto un = static_cast<std::size_t>(n);
  const auto ud = static_cast<std::size_t>(d);
  RngStream rng(opt.seed, 0xF0F0'0000ull + un);
  std::vector<double> s(un), r(un), sigma(un), xi(un * ud), partial(ud);
  std::vector<std::size_t> os(un), orr(un);
  auto stable_factor = [&](const std::vector<double>& times, std::vector<std::size_t>& order) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });
    std::fill(partial.begin(), partial.end(), 0.0);
    double expo = 0.0;
    for (std::size_t m = 0; m < un; ++m) {
      const std::size_t j = order[m];
      double norm2 = 0.0;
      for (std::size_t k = 0; k < ud; ++k) {
        partial[k] += xi[j * ud + k];
        norm2 += partial[k] * partial[k];
      }
      const double next = m + 1 < un ? times[order[m + 1]] : t;
      expo += kStableScale * (next - times[j]) * std::pow(norm2, 0.5 * alpha);
    }
    return expo;
  };
  const std::size_t n_samples = std::max<std::size_t>(opt.mc_samples, 2);
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (std::size_t j = 0; j < un; ++j) s[j] = t * rng.uniform();
    for (std::size_t j = 0; j < un; ++j) r[j] = t * rng.uniform();
    // s in the simplex, r_j paired by index with the sorted s_j.
    std::sort(s.begin(), s.end());
    double log_w = -static_cast<double>(n * d) * std::log(2.0 * kPi);
    double gauss = 0.0;
    for (std::size_t j = 0; j < un; ++j) {
      const double tau = std::abs(s[j] - r[j]);
      const double expo = (t - s[j]) + (t - r[j]);
      sigma[j] = 1.0 / std::max(std::sqrt(tau), std::pow(expo, 1.0 / alpha));
      for (std::size_t k = 0; k < ud; ++k) {
        const double u = rng.uniform();
        const double x = sigma[j] * std::tan(kPi * (u - 0.5));
        xi[j * ud + k] = x;
        log_w -= std::log(sigma[j] / (kPi * (sigma[j] * sigma[j] + x * x)));
        gauss += 0.5 * tau * x * x;
      }
    }
    const double expo = stable_factor(s, os) + stable_factor(r, orr) + gauss;
    const double w = std::exp(log_w - expo);
    sum += w;
    sum2 += w * w;
  }
  const double m = sum / static_cast<double>(n_samples);
  const double var = std::max(0.0, sum2 / static_cast<double>(n_samples) - m * m);
  const double vol = simplex_volume(n, t);
  return {n, vol * m, vol * std::sqrt(var / static_cast<double>(n_samples - 1)), ChaosMethod::fourier_mc};
}

}  // namespace

std::string to_string(ChaosMethod m) {
  return m == ChaosMethod::closed_form_alpha2 ? "closed_form_alpha2" : "fourier_mc";
}

ExistenceReport existence_check(double alpha, int d) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
  if (d < 1) throw DomainError("dimension d must be >= 1");
  ExistenceReport r;
  r.alpha = alpha;
  r.d = d;
  r.p_choice = (4.0 + 2.0 * alpha) / alpha;
  r.q_choice = 1.0 + alpha / 2.0;
  const double p = r.p_choice;
  const double q = r.q_choice;
  r.cond_d_lt_2q = d < 2.0 * q;
  r.cond_d_lt_4pqa = d < 4.0 * p * q * alpha / (4.0 * q + p * alpha);
  r.cond_d_lt_pa2 = d < p * alpha / 2.0;
  r.exists = r.cond_d_lt_2q && r.cond_d_lt_4pqa && r.cond_d_lt_pa2;
  return r;
}

double series_bound_constant(double alpha, int d) {
  const double p = (4.0 + 2.0 * alpha) / alpha;
  const double q = 1.0 + alpha / 2.0;
  const double stable = stable_ft_mass(alpha, d);
  return std::pow(2.0 * kPi, -d) * std::pow(kStableScale * p, -2.0 * d / (p * alpha)) * std::pow(stable, 2.0 / p) *
         std::pow(2.0 * kPi / q, d / (2.0 * q));
}

double log_series_term_bound(int n, double alpha, int d, double t) {
  if (n < 0) throw DomainError("chaos order must be nonnegative");
  if (!(t > 0.0)) throw DomainError("time horizon must be positive");
  const auto report = existence_check(alpha, d);
  if (!report.exists) {
    throw RegimeError(regime::kSkorohodNeedsDLt2PlusAlpha, "term bound requested outside d < 2 + alpha");
  }
  const double p = report.p_choice;
  const double q = report.q_choice;
  const double e = 2.0 - d / (2.0 * q);
  const double kappa = 2.0 * d / (p * alpha * e);
  if (!(kappa < 1.0)) throw DomainError("term bound hits a Gamma pole");
  const double nn = n;
  return nn * std::log(series_bound_constant(alpha, d)) + (1.0 - d / (2.0 * q)) * std::lgamma(nn + 1.0) +
         e * (nn * std::lgamma(1.0 - kappa) + nn * (1.0 - kappa) * std::log(t) - std::lgamma(nn * (1.0 - kappa) + 1.0));
}

double series_term_bound(int n, double alpha, int d, double t) {
  return std::exp(log_series_term_bound(n, alpha, d, t));
}

ChaosTerm chaos_term(int n, double alpha, int d, double t, const InitialCondition& u0, const ChaosOptions& options) {
  if (n < 0) throw DomainError("chaos order must be nonnegative");
  if (n > kMaxChaosOrder) throw BudgetError("chaos terms are limited to n <= 6");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0, 2]");
  if (d < 1) throw DomainError("dimension d must be >= 1");
  if (!(t > 0.0)) throw DomainError("time horizon must be positive");
  if (u0.kind() != InitialCondition::Kind::constant) {
    throw DomainError("chaos terms are implemented for constant initial data only");
  }
  const double c2 = u0.a() * u0.a();
  const bool closed = alpha == 2.0 && !options.force_fourier;
  if (n == 0) return {0, c2, 0.0, closed ? ChaosMethod::closed_form_alpha2 : ChaosMethod::fourier_mc};
  ChaosTerm term = closed ? closed_form_term(n, d, t, options) : fourier_term(n, alpha, d, t, options);
  term.value *= c2;
  term.mc_error *= c2;
  return term;
}

ChaosSeries chaos_second_moment(double alpha, int d, double t, int n_max, const InitialCondition& u0,
                                const ChaosOptions& options) {
  const auto report = existence_check(alpha, d);
  if (!report.exists) {
    throw RegimeError(regime::kSkorohodNeedsDLt2PlusAlpha, "second moment requested outside d < 2 + alpha");
  }
  if (n_max < 0) throw DomainError("n_max must be nonnegative");
  if (n_max > kMaxChaosOrder) throw BudgetError("chaos terms are limited to n <= 6");
  ChaosSeries out;
  double var = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    out.terms.push_back(chaos_term(n, alpha, d, t, u0, options));
    out.value += out.terms.back().value;
    var += out.terms.back().mc_error * out.terms.back().mc_error;
  }
  out.mc_error = std::sqrt(var);
  const double anchor = out.terms.back().value;
  const double log_anchor = log_series_term_bound(n_max, alpha, d, t);
  double tail = 0.0;
  for (int m = n_max + 1; m < n_max + 400; ++m) {
    const double ratio = std::exp(log_series_term_bound(m, alpha, d, t) - log_anchor);
    tail += ratio;
    if (ratio < 1e-17 * tail) break;
  }
  out.tail = anchor * tail;
  return out;
}

}  // namespace fracheat
