#pragma once

#include "pcc/nn/module.hpp"

namespace pcc::nn {

inline constexpr Real kBatchNormMomentum = Real(0.1);
inline constexpr Real kBatchNormEps = Real(1e-5);

/// Per-channel batch normalization over (batch x points) of a [B, C, N] tensor.
/// Training mode normalizes with batch statistics and updates the running estimates
/// (unbiased variance); eval mode uses the running estimates only.
class BatchNorm : public Module {
 public:
  BatchNorm(std::string name, std::size_t channels, Real momentum = kBatchNormMomentum,
            Real eps = kBatchNormEps);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  void collect_parameters(std::vector<Parameter*>& out) override;
  void collect_buffers(std::vector<Buffer>& out) override;
  void set_training(bool training) override { training_ = training; }

  bool training() const noexcept { return training_; }
  Parameter& gamma() noexcept { return gamma_; }
  Parameter& beta() noexcept { return beta_; }
  Tensor& running_mean() noexcept { return running_mean_; }
  Tensor& running_var() noexcept { return running_var_; }

 private:
  std::size_t channels_;
  Real momentum_, eps_;
  bool training_ = true;
  Parameter gamma_, beta_;
  Tensor running_mean_, running_var_;

  // cached for backward
  bool cached_training_ = true;
  Tensor normalized_;
  std::vector<Real> inv_std_;
};

}  // namespace pcc::nn
