#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace vqcfd {

struct CriterionResult {
  int id;
  std::string title;
  bool pass;
  /// Measured values, formatted deterministically.
  std::string detail;
  double seconds;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;

  bool passed() const;
  /// One line per criterion; timings are left out when `timings` is false so
  /// that reports from identical runs compare equal.
  std::string text(bool timings = true) const;
};

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  /// Criterion ids to run; empty means all. Criterion 9 reruns 1-8.
  std::vector<int> only;
  /// Called as each criterion finishes.
  std::function<void(const CriterionResult &)> on_result;
};

AcceptanceReport run_acceptance(const AcceptanceOptions &options = {});

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double> &x, const std::vector<double> &y);

} // namespace vqcfd
