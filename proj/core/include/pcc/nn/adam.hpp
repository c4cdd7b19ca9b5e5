#pragma once

#include "pcc/nn/module.hpp"

#include <vector>

namespace pcc::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Bias-corrected ADAM. Moments and step counters live in each Parameter, so the
/// optimizer itself is stateless apart from its hyperparameters. Gradients are left
/// untouched; callers clear them.
class Adam {
 public:
  explicit Adam(AdamOptions options = {}) : options_(options) {}

  void step(const std::vector<Parameter*>& params) const;
  const AdamOptions& options() const noexcept { return options_; }

 private:
  AdamOptions options_;
};

/// Scales all gradients so their global L2 norm is at most max_norm. Returns the norm before
/// clipping.
double clip_grad_norm(const std::vector<Parameter*>& params, double max_norm);

}  // namespace pcc::nn
