#pragma once

#include "pcc/nn/batch_norm.hpp"
#include "pcc/nn/broadcast_linear.hpp"
#include "pcc/nn/layers.hpp"
#include "pcc/random.hpp"

#include <vector>

namespace pcc {

/// Predicts a displacement field in [-1, 1]^3 for a labeled cloud [B, 4, N] (xyz + origin
/// label). Local features of the first block are concatenated with the max-pooled global
/// feature of the third block before the four-layer head.
class PointRefiner : public nn::Module {
 public:
  PointRefiner(const std::vector<std::size_t>& widths, const std::vector<std::size_t>& head,
               Rng& rng);

  nn::Tensor forward(const nn::Tensor& labeled) override;
  nn::Tensor backward(const nn::Tensor& grad_displacement) override;
  void collect_parameters(std::vector<nn::Parameter*>& out) override;
  void collect_buffers(std::vector<nn::Buffer>& out) override;
  void set_training(bool training) override;

  std::size_t concat_width() const noexcept { return fuse_.concat_width(); }
  /// Final shared-linear layer before the tanh.
  nn::SharedLinear& output_layer() noexcept { return *output_layer_; }

 private:
  nn::Sequential local_;   // L1
  nn::Sequential global_;  // L2, L3, max-pool
  nn::BroadcastLinear fuse_;  // L5 linear part
  nn::Sequential head_;    // L5 BN/ReLU, L6, L7, L8, tanh
  nn::SharedLinear* output_layer_ = nullptr;
};

}  // namespace pcc
