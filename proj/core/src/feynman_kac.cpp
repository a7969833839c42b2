#include "fracheat/feynman_kac.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>
#include <cmath>
#include <functional>
#include <optional>
#include <numbers>

#include "fracheat/chaos.hpp"
#include "fracheat/errors.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/parallel.hpp"

namespace fracheat {

namespace {

void require_stratonovich_regime(const ModelParams& params) {
  if (params.d != 1) {
    throw RegimeError(regime::kStratonovichNeedsD1, "Stratonovich moments exist only for d = 1");
  }
}

void require_skorohod_regime(const ModelParams& params) {
  if (!existence_check(params.alpha, params.d).exists) {
    throw RegimeError(regime::kSkorohodNeedsDLt2PlusAlpha, "Skorohod moments need d < 2 + alpha");
  }
}

void check_setup(const ModelParams& params, const MonteCarloSetup& mc) {
  params.validate();
  if (mc.p < 1) throw DomainError("moment order p must be a positive integer");
  if (mc.n_samples < 1) throw DomainError("need at least one Monte Carlo sample");
  if (std::abs(mc.grid.horizon() - params.t_horizon) > 1e-12 * params.t_horizon) {
    throw DomainError("time grid must end at the model horizon");
  }
}

MomentEstimate make_estimate(const std::vector<double>& values, const MonteCarloSetup& mc, Flavor flavor) {
  const auto stats = sample_stats(values);
  MomentEstimate e;
  e.value = stats.mean;
  e.std_error = stats.std_error;
  e.n_samples = values.size();
  e.p_order = mc.p;
  e.flavor = flavor;
  e.seed = mc.seed;
  e.grid_steps = mc.grid.n_steps();
  if (!std::isfinite(e.value)) throw NumericalError("moment estimate is not finite", 0.0);
  return e;
}

std::vector<Path> draw_paths(const ModelParams& params, const TimeGrid& grid, std::size_t count, RngStream& rng) {
  std::vector<Path> paths(count);
  for (auto& p : paths) sample_path_into(params.alpha, params.d, grid, params.x_point, rng, p);
  return paths;
}

// int_0^inf cos(k y) g(y) dy * 2 for the even 1-D stable density.
double stable_cosine_transform(double alpha, double t, double k) {
  if (k == 0.0) return 1.0;
  auto g = [&](double y) { return stable_kernel(alpha, t, y); };
  thread_local boost::math::quadrature::ooura_fourier_cos<double> integrator(1e-10, 10);
  return 2.0 * integrator.integrate(g, std::abs(k)).first;
}

// int g_alpha(t, y) f(x - y) dy in one dimension for a rapidly decaying f of width w.
double local_convolution(double alpha, double t, double x, double w, const std::function<double(double)>& f) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double lo = x - 40.0 * w;
  const double hi = x + 40.0 * w;
  auto integrand = [&](double y) { return stable_kernel(alpha, t, y) * f(x - y); };
  if (lo < 0.0 && hi > 0.0) {
    return GK::integrate(integrand, lo, 0.0, 15, 1e-12) + GK::integrate(integrand, 0.0, hi, 15, 1e-12);
  }
  return GK::integrate(integrand, lo, hi, 15, 1e-12);
}

}  // namespace

std::string to_string(Flavor f) { return f == Flavor::stratonovich ? "stratonovich" : "skorohod"; }

Flavor parse_flavor(const std::string& s) {
  if (s == "strat" || s == "stratonovich") return Flavor::stratonovich;
  if (s == "sko" || s == "skorohod") return Flavor::skorohod;
  throw DomainError("unknown flavor '" + s + "' (expected strat or sko)");
}

std::vector<SampleExponents> fk_sample_exponents(const ModelParams& params, const MonteCarloSetup& mc,
                                                 bool with_self) {
  check_setup(params, mc);
  const bool need_quadrature = with_self || mc.p > 1;
  std::optional<ExponentQuadrature> quad;
  if (need_quadrature) quad.emplace(mc.grid, params.d);
  const double bound = params.d == 1 ? deterministic_bound(params.t_horizon, 1).value : 0.0;
  std::vector<SampleExponents> out(mc.n_samples);
  parallel_for(mc.n_samples, mc.workers, [&](std::size_t i) {
    RngStream rng(mc.seed, i);
    const auto paths = draw_paths(params, mc.grid, static_cast<std::size_t>(mc.p), rng);
    SampleExponents s;
    for (const auto& path : paths) s.u0_weight *= params.u0(path.end());
    if (need_quadrature) {
      for (std::size_t j = 0; j < paths.size(); ++j) {
        if (with_self) {
          const double v = quad->self(paths[j].positions);
          if (params.d == 1 && v > bound * (1.0 + 1e-12)) {
            throw NumericalError("self exponent exceeds its deterministic bound", v - bound);
          }
          s.self_sum += v;
        }
        for (std::size_t k = j + 1; k < paths.size(); ++k) s.cross_sum += quad->cross(paths[j].positions, paths[k].positions);
      }
    }
    out[i] = s;
  });
  return out;
}

MomentEstimate moment_from_exponents(const std::vector<SampleExponents>& samples, const MonteCarloSetup& mc,
                                     Flavor flavor) {
  std::vector<double> v(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& e = samples[i];
    if (flavor == Flavor::stratonovich) {
      v[i] = e.u0_weight * std::exp(0.5 * e.self_sum + e.cross_sum);
    } else {
      v[i] = mc.p == 1 ? e.u0_weight : e.u0_weight * std::exp(e.cross_sum);
    }
  }
  return make_estimate(v, mc, flavor);
}

std::pair<MomentEstimate, MomentEstimate> paired_moments(const ModelParams& params, const MonteCarloSetup& mc,
                                                         std::vector<SampleExponents>* samples) {
  require_stratonovich_regime(params);
  auto ex = fk_sample_exponents(params, mc, true);
  auto out = std::make_pair(moment_from_exponents(ex, mc, Flavor::stratonovich),
                            moment_from_exponents(ex, mc, Flavor::skorohod));
  if (samples) *samples = std::move(ex);
  return out;
}

MomentEstimate strat_moment(const ModelParams& params, const MonteCarloSetup& mc) {
  require_stratonovich_regime(params);
  return moment_from_exponents(fk_sample_exponents(params, mc, true), mc, Flavor::stratonovich);
}

MomentEstimate sko_moment(const ModelParams& params, const MonteCarloSetup& mc) {
  params.validate();
  require_skorohod_regime(params);
  return moment_from_exponents(fk_sample_exponents(params, mc, false), mc, Flavor::skorohod);
}

MomentEstimate strat_moment_mollified(const ModelParams& params, const MonteCarloSetup& mc, MollifierParams moll) {
  check_setup(params, mc);
  require_stratonovich_regime(params);
  const MollifiedQuadrature quad(mc.grid, params.d, moll);
  std::vector<double> v(mc.n_samples);
  parallel_for(mc.n_samples, mc.workers, [&](std::size_t i) {
    RngStream rng(mc.seed, i);
    const auto paths = draw_paths(params, mc.grid, static_cast<std::size_t>(mc.p), rng);
    double w = 1.0;
    double expo = 0.0;
    for (std::size_t j = 0; j < paths.size(); ++j) {
      w *= params.u0(paths[j].end());
      expo += quad.inner(paths[j].positions, paths[j].positions);
      for (std::size_t k = j + 1; k < paths.size(); ++k) expo += 2.0 * quad.inner(paths[j].positions, paths[k].positions);
    }
    v[i] = w * std::exp(0.5 * expo);
  });
  return make_estimate(v, mc, Flavor::stratonovich);
}

double sko_mean_exact(const ModelParams& params) {
  params.validate();
  const auto& u0 = params.u0;
  const double t = params.t_horizon;
  const double a = params.alpha;
  switch (u0.kind()) {
    case InitialCondition::Kind::constant:
      return u0.a();
    case InitialCondition::Kind::cosine:
      // The first coordinate of an isotropic stable vector is 1-D stable with the same alpha.
      return std::cos(u0.a() * params.x_point[0]) * stable_cosine_transform(a, t, u0.a());
    case InitialCondition::Kind::gaussian_bump: {
      if (params.d > 1 && a != 2.0) {
        throw DomainError("exact mean of a gaussian bump is implemented for d = 1 or alpha = 2");
      }
      const double w = u0.b();
      double value = u0.a();
      for (double xk : params.x_point) {
        value *= local_convolution(a, t, xk, w, [w](double y) { return std::exp(-y * y / (2.0 * w * w)); });
      }
      return value;
    }
  }
  return 0.0;
}

SolutionSample solution_from_weights(const std::vector<double>& u0_values, const WickWeights& weights,
                                     MollifierParams moll, Flavor flavor) {
  const auto m = u0_values.size();
  if (static_cast<std::size_t>(weights.gaussians.size()) != m) {
    throw DomainError("one Wick weight per inner path is required");
  }
  std::vector<double> terms(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    double g = weights.gaussians[ii];
    if (flavor == Flavor::skorohod) g -= 0.5 * weights.gram(ii, ii);
    terms[i] = u0_values[i] * std::exp(g);
  }
  SolutionSample s;
  s.value = m ? pairwise_sum(terms) / static_cast<double>(m) : 0.0;
  s.inner_paths = m;
  s.moll = moll;
  s.flavor = flavor;
  return s;
}

namespace {

SolutionSample solution_sample(const ModelParams& params, std::size_t m_inner, MollifierParams moll,
                               const TimeGrid& grid, RngStream& rng, Flavor flavor) {
  params.validate();
  moll.validate();
  if (params.d != 1) {
    throw RegimeError(flavor == Flavor::stratonovich ? regime::kStratonovichNeedsD1 : regime::kSkorohodPathwiseNeedsD1,
                      "pathwise Feynman-Kac solutions need d = 1");
  }
  if (m_inner < 1) throw DomainError("need at least one inner path");
  const auto paths = draw_paths(params, grid, m_inner, rng);
  std::vector<double> u0_values(m_inner);
  for (std::size_t i = 0; i < m_inner; ++i) u0_values[i] = params.u0(paths[i].end());
  const auto weights = sample_wick_weights(paths, moll, params.d, rng);
  return solution_from_weights(u0_values, weights, moll, flavor);
}

}  // namespace

SolutionSample strat_solution_sample(const ModelParams& params, std::size_t m_inner, MollifierParams moll,
                                     const TimeGrid& grid, RngStream& rng) {
  return solution_sample(params, m_inner, moll, grid, rng, Flavor::stratonovich);
}

SolutionSample sko_solution_sample(const ModelParams& params, std::size_t m_inner, MollifierParams moll,
                                   const TimeGrid& grid, RngStream& rng) {
  return solution_sample(params, m_inner, moll, grid, rng, Flavor::skorohod);
}

}  // namespace fracheat
