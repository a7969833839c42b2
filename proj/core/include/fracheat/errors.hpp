#pragma once

#include <stdexcept>
#include <string>

namespace fracheat {

/// Input outside the mathematical domain of an operation (t <= 0, eps <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The requested (alpha, d, flavor) combination lies outside the regime where
/// the object being computed exists. `condition()` names the violated condition.
class RegimeError : public std::runtime_error {
 public:
  RegimeError(std::string condition, const std::string& what)
      : std::runtime_error(what), condition_(std::move(condition)) {}
  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

/// Work requested exceeds a hard size limit of the implementation.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure failed (e.g. covariance factorization).
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

namespace regime {
inline constexpr const char* kStratonovichNeedsD1 =
    "d = 1 (the self-intersection exponent is exponentially integrable iff d = 1)";
inline constexpr const char* kSkorohodNeedsDLt2PlusAlpha =
    "d < 2 + alpha (Skorohod chaos series converges iff d < 2 + alpha)";
inline constexpr const char* kSkorohodPathwiseNeedsD1 =
    "d = 1 (pathwise Skorohod Feynman-Kac representation holds only for d = 1)";
}  // namespace regime

}  // namespace fracheat
