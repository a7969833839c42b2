#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracheat::cli {

enum class SuiteScale { full, quick };

struct CheckResult {
  std::string id;
  std::string name;
  bool pass = false;
  std::string measured;
  std::string requirement;
  double seconds = 0.0;
};

struct SuiteOptions {
  SuiteScale scale = SuiteScale::full;
  unsigned workers = 1;
  std::uint64_t seed = 20240601;
};

inline constexpr int kAcceptanceCount = 10;

/// Acceptance criterion `id` (1..10) with its pinned tolerance and runtime limit.
CheckResult acceptance_check(int id, const SuiteOptions& opt);
/// Module invariants (kernel, paths, exponent, Gaussian field, chaos, FK, solver).
std::vector<CheckResult> invariant_checks(const SuiteOptions& opt, std::ostream* log = nullptr);

std::vector<CheckResult> run_acceptance(const SuiteOptions& opt, std::ostream* log = nullptr);

/// "PASS  C1  name | measured ... | requires ... | 0.01 s".
std::string format_line(const CheckResult& r);

}  // namespace fracheat::cli
