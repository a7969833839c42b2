#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracheat/exponent.hpp"
#include "fracheat/gaussian_field.hpp"
#include "fracheat/model.hpp"
#include "fracheat/stable_path.hpp"

namespace fracheat {

enum class Flavor { stratonovich, skorohod };
std::string to_string(Flavor f);
Flavor parse_flavor(const std::string& s);

struct MomentEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  int p_order = 1;
  Flavor flavor = Flavor::skorohod;
  std::uint64_t seed = 0;
  std::size_t grid_steps = 0;
};

/// Per-sample ingredients of the moment formulas for p independent paths started at x:
/// prod_j u0(X^j_t + x), sum_j V(X^j, X^j) and sum_{j<k} V(X^j, X^k).
struct SampleExponents {
  double u0_weight = 1.0;
  double self_sum = 0.0;
  double cross_sum = 0.0;
};

struct MonteCarloSetup {
  int p = 1;
  std::size_t n_samples = 1000;
  TimeGrid grid;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

/// Sample i uses RngStream(seed, i) and draws its p paths in order. Results do not
/// depend on the worker count.
std::vector<SampleExponents> fk_sample_exponents(const ModelParams& params, const MonteCarloSetup& mc,
                                                 bool with_self);

/// Averages the flavor's integrand over precomputed per-sample exponents.
MomentEstimate moment_from_exponents(const std::vector<SampleExponents>& samples, const MonteCarloSetup& mc,
                                     Flavor flavor);

/// E[prod u0 exp(1/2 sum_j V_jj + sum_{j<k} V_jk)]. Needs d = 1.
MomentEstimate strat_moment(const ModelParams& params, const MonteCarloSetup& mc);
/// E[prod u0 exp(sum_{j<k} V_jk)]. Needs d < 2 + alpha.
MomentEstimate sko_moment(const ModelParams& params, const MonteCarloSetup& mc);
/// Both estimators on the same samples (strat >= sko holds sample by sample when u0 >= 0).
std::pair<MomentEstimate, MomentEstimate> paired_moments(const ModelParams& params, const MonteCarloSetup& mc,
                                                         std::vector<SampleExponents>* samples = nullptr);

/// Smooth-noise Stratonovich moment E[prod u0 exp(1/2 sum_{j,k} <A_j, A_k>)] with the
/// (epsilon, delta)-mollified inner product. Needs d = 1.
MomentEstimate strat_moment_mollified(const ModelParams& params, const MonteCarloSetup& mc, MollifierParams moll);

/// (g_alpha(t, .) * u0)(x) by numerical quadrature against stable_kernel.
double sko_mean_exact(const ModelParams& params);

struct SolutionSample {
  double value = 0.0;
  std::size_t inner_paths = 0;
  MollifierParams moll;
  Flavor flavor = Flavor::stratonovich;
};

/// (1/M) sum_m u0_m exp(G_m) (Stratonovich) or exp(G_m - gram_mm / 2) (Skorohod).
SolutionSample solution_from_weights(const std::vector<double>& u0_values, const WickWeights& weights,
                                     MollifierParams moll, Flavor flavor);

/// One realization of u^{eps,delta}(t, x): M inner paths and one joint Wick-weight draw.
SolutionSample strat_solution_sample(const ModelParams& params, std::size_t m_inner, MollifierParams moll,
                                     const TimeGrid& grid, RngStream& rng);
SolutionSample sko_solution_sample(const ModelParams& params, std::size_t m_inner, MollifierParams moll,
                                   const TimeGrid& grid, RngStream& rng);

}  // namespace fracheat
