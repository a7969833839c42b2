#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracheat {

/// Normalisation of the fractional Laplacian symbol: F g_alpha(t, xi) = exp(-c t |xi|^alpha).
/// With c = 1/2 the alpha = 2 case is exactly the heat kernel.
inline constexpr double kStableScale = 0.5;

/// Bounded continuous initial data u0.
class InitialCondition {
 public:
  enum class Kind { constant, gaussian_bump, cosine };

  static InitialCondition constant(double c = 1.0);
  /// amplitude * exp(-|x|^2 / (2 width^2)).
  static InitialCondition gaussian_bump(double amplitude, double width);
  /// cos(frequency * x_1).
  static InitialCondition cosine(double frequency);

  /// Parses `const:<c>`, `gauss:<amp>,<width>` or `cos:<k>`. Throws DomainError.
  static InitialCondition parse(std::string_view descriptor);

  Kind kind() const noexcept { return kind_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  double operator()(std::span<const double> x) const;
  double operator()(double x) const;
  double sup_norm() const noexcept;

  std::string descriptor() const;

 private:
  InitialCondition(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

struct ModelParams {
  double alpha = 2.0;
  int d = 1;
  double c_alpha = kStableScale;
  double t_horizon = 1.0;
  std::vector<double> x_point{0.0};
  InitialCondition u0 = InitialCondition::constant(1.0);

  /// Throws DomainError unless alpha in (0,2], d >= 1, t > 0, |x| = d and c = 1/2.
  void validate() const;
};

}  // namespace fracheat
