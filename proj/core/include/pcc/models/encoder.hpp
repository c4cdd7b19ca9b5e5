#pragma once

#include "pcc/nn/layers.hpp"
#include "pcc/random.hpp"

#include <vector>

namespace pcc {

/// PointNet-style encoder: three shared-linear blocks (BN+ReLU, BN+ReLU, BN), a max-pool over
/// points, then a fully-connected layer. [B, 3, N] -> [B, feature_dim].
class MpnEncoder : public nn::Module {
 public:
  MpnEncoder(const std::vector<std::size_t>& widths, std::size_t feature_dim, Rng& rng);

  nn::Tensor forward(const nn::Tensor& points) override;
  nn::Tensor backward(const nn::Tensor& grad_feature) override;
  void collect_parameters(std::vector<nn::Parameter*>& out) override { net_.collect_parameters(out); }
  void collect_buffers(std::vector<nn::Buffer>& out) override { net_.collect_buffers(out); }
  void set_training(bool training) override { net_.set_training(training); }

  std::size_t feature_dim() const noexcept { return feature_dim_; }

 private:
  std::size_t feature_dim_;
  nn::Sequential net_;
};

}  // namespace pcc
