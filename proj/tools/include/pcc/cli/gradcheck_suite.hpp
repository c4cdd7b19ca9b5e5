#pragma once

#include "pcc/nn/grad_check.hpp"

#include <string>
#include <vector>

namespace pcc::cli {

inline constexpr double kLayerTolerance = 1e-5;
inline constexpr double kComposedTolerance = 1e-4;

struct GradcheckSuiteOptions {
  /// Name of a module entry whose backward is deliberately scaled (harness self-test).
  std::string corrupt;
  Seed seed = 7;
};

struct GradcheckSuiteReport {
  std::vector<nn::GradCheckReport> entries;

  bool passed() const;
  std::vector<std::string> failures() const;
};

/// Finite-difference checks over every layer type, both networks of the pipeline and the
/// end-to-end model at toy sizes (double precision).
GradcheckSuiteReport run_gradcheck_suite(const GradcheckSuiteOptions& options = {});

/// Entry names in suite order.
std::vector<std::string> gradcheck_suite_names();

/// One line per entry: name, max relative error, tolerance, PASS/FAIL.
std::string format_gradcheck_report(const GradcheckSuiteReport& report);

}  // namespace pcc::cli
