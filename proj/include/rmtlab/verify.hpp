#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace rmtlab {

/// Deliberate faults for testing the checker itself.
struct VerifyOptions {
  bool wrong_msc_branch = false;
};

struct SuiteOutcome {
  double max_residual = 0.0;
  std::size_t checks = 0;
};

/// A deterministic identity check. `residual` is zero for a perfect result
/// and is compared against `threshold`.
struct VerifySuite {
  std::string name;
  std::string description;
  double threshold = 0.0;
  std::function<SuiteOutcome(const VerifyOptions&)> run;
};

struct SuiteResult {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  std::size_t checks = 0;
  double seconds = 0.0;
  std::string error;  // non-empty if the suite threw

  bool passed() const { return error.empty() && max_residual <= threshold; }
};

/// Every identity suite, in a fixed order.
const std::vector<VerifySuite>& verify_registry();

std::vector<SuiteResult> run_verify(const VerifyOptions& opts);

}  // namespace rmtlab
