#pragma once

#include "pcc/nn/module.hpp"
#include "pcc/random.hpp"

#include <functional>
#include <span>
#include <string>

namespace pcc::nn {

struct GradCheckOptions {
  double step = 1e-5;
  double tolerance = 1e-6;
  /// Denominator floor for the relative error |a - n| / max(|a|, |n|, floor).
  double floor = 1e-3;
  bool check_input = true;
  Seed seed = 7;
};

struct GradCheckReport {
  std::string name;
  double max_input_error = 0.0;
  double max_parameter_error = 0.0;
  std::size_t entries = 0;
  double tolerance = 0.0;

  double max_error() const noexcept {
    return max_input_error > max_parameter_error ? max_input_error : max_parameter_error;
  }
  bool passed() const noexcept { return max_error() < tolerance; }
};

double relative_error(double analytic, double numeric, double floor);

/// Central differences of `objective` with respect to every entry of `values`, compared
/// with `analytic`. Entries are restored after perturbation. Returns the max relative error.
double compare_with_central_differences(std::span<Real> values, std::span<const Real> analytic,
                                        const std::function<double()>& objective,
                                        const GradCheckOptions& options);

/// Checks a module's backward pass on the scalar objective sum(r * forward(x)) for a fixed
/// random projection r, over every input entry and every parameter entry.
GradCheckReport grad_check(Module& module, const Tensor& input, const GradCheckOptions& options);

}  // namespace pcc::nn
