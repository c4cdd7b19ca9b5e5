#include "pcc/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pcc::nn {

double relative_error(double analytic, double numeric, double floor) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), floor});
  return std::abs(analytic - numeric) / denom;
}

double compare_with_central_differences(std::span<Real> values, std::span<const Real> analytic,
                                        const std::function<double()>& objective,
                                        const GradCheckOptions& options) {
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Real saved = values[i];
    values[i] = static_cast<Real>(saved + options.step);
    const double plus = objective();
    values[i] = static_cast<Real>(saved - options.step);
    const double minus = objective();
    values[i] = saved;
    const double numeric = (plus - minus) / (2.0 * options.step);
    worst = std::max(worst, relative_error(analytic[i], numeric, options.floor));
  }
  return worst;
}

GradCheckReport grad_check(Module& module, const Tensor& input, const GradCheckOptions& options) {
  GradCheckReport report;
  report.name = module.name();
  report.tolerance = options.tolerance;

  Tensor x = input;
  const Tensor probe = module.forward(x);
  Tensor projection(probe.shape());
  Rng rng(options.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (auto& r : projection.values()) r = static_cast<Real>(dist(rng));

  auto objective = [&]() {
    const Tensor y = module.forward(x);
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += static_cast<double>(y[i]) * projection[i];
    return s;
  };

  const auto params = module.parameters();
  zero_grad(params);
  module.forward(x);
  const Tensor grad_x = module.backward(projection);
  std::vector<Tensor> grad_params;
  grad_params.reserve(params.size());
  for (auto* p : params) grad_params.push_back(p->grad);

  if (options.check_input) {
    report.max_input_error =
        compare_with_central_differences(x.values(), grad_x.values(), objective, options);
    report.entries += x.size();
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    report.max_parameter_error =
        std::max(report.max_parameter_error,
                 compare_with_central_differences(params[k]->value.values(),
                                                  grad_params[k].values(), objective, options));
    report.entries += params[k]->value.size();
  }
  return report;
}

}  // namespace pcc::nn
