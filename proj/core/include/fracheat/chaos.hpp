#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracheat/model.hpp"

namespace fracheat {

enum class ChaosMethod { closed_form_alpha2, fourier_mc };
std::string to_string(ChaosMethod m);

/// n-th term n! ||f_n||^2 of the second-moment chaos series.
struct ChaosTerm {
  int n = 0;
  double value = 0.0;
  double mc_error = 0.0;
  ChaosMethod method = ChaosMethod::closed_form_alpha2;
};

struct ChaosOptions {
  /// Forces a method; by default alpha = 2 uses the closed form, alpha < 2 Fourier MC.
  bool force_fourier = false;
  /// Randomized QMC: Sobol points per shift and number of random shifts.
  std::size_t qmc_points = std::size_t{1} << 15;
  int qmc_shifts = 16;
  /// Plain MC samples for the Fourier route.
  std::size_t mc_samples = 400000;
  std::uint64_t seed = 20240601;
};

inline constexpr int kMaxChaosOrder = 6;

/// For alpha = 2 the spatial integrals collapse to Gaussian determinants:
///   term_n = int_{s in simplex} int_{r in [0,t]^n} (2 pi)^{-nd/2} det(T + C)^{-d/2},
/// T = diag |s_j - r_j|, C_jk = min(a_j, a_k) + min(b_j, b_k), a = t - s, b = t - r,
/// integrated by randomized Sobol QMC. Otherwise the Fourier representation is
/// integrated by Monte Carlo over (s, r, xi) with a Cauchy proposal in xi.
/// Only constant u0 is supported; the term scales with u0^2.
ChaosTerm chaos_term(int n, double alpha, int d, double t, const InitialCondition& u0 = InitialCondition::constant(),
                     const ChaosOptions& options = {});

struct ChaosSeries {
  std::vector<ChaosTerm> terms;
  double value = 0.0;
  /// Root-sum-square of the per-term errors.
  double mc_error = 0.0;
  /// Estimate of sum_{n > n_max} obtained by scaling the last term with ratios of series_term_bound.
  double tail = 0.0;
};

ChaosSeries chaos_second_moment(double alpha, int d, double t, int n_max,
                                const InitialCondition& u0 = InitialCondition::constant(),
                                const ChaosOptions& options = {});

/// Constant C of the term bound: product of the Plancherel factor (2 pi)^{-d}, the stable
/// transform power integrals raised to 1/p and the Gaussian one raised to 1/q, with the
/// Hardy-Littlewood type constant taken as 1.
double series_bound_constant(double alpha, int d);

/// C^n (n!)^{1 - d/2q} [Gamma(1-k)^n t^{n(1-k)} / Gamma(n(1-k)+1)]^{2 - d/2q},
/// k = 2d / (p alpha (2 - d/2q)), p = (4 + 2 alpha)/alpha, q = 1 + alpha/2.
double series_term_bound(int n, double alpha, int d, double t);
/// Same in log space (for large n).
double log_series_term_bound(int n, double alpha, int d, double t);

struct ExistenceReport {
  double alpha = 0.0;
  int d = 0;
  double p_choice = 0.0;
  double q_choice = 0.0;
  bool cond_d_lt_2q = false;
  bool cond_d_lt_4pqa = false;
  bool cond_d_lt_pa2 = false;
  bool exists = false;
};

ExistenceReport existence_check(double alpha, int d);

}  // namespace fracheat
