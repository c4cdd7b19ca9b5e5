#pragma once

#include "pcc/nn/module.hpp"
#include "pcc/random.hpp"

#include <utility>

namespace pcc::nn {

/// Shared linear layer applied to concat(local[b,:,i], global[b,:]) for every point i,
/// without materializing the replicated global block:
///   out[b,:,i] = W_local * local[b,:,i] + W_global * global[b,:] + bias
/// Equivalent to replicating `global` N times, concatenating along channels (local first)
/// and running a SharedLinear of width local + global.
class BroadcastLinear {
 public:
  BroadcastLinear(std::string name, std::size_t local_channels, std::size_t global_channels,
                  std::size_t out_channels, Rng& rng);

  /// local: [B, C_local, N], global: [B, C_global] -> [B, C_out, N]
  Tensor forward(const Tensor& local, const Tensor& global);
  /// Returns (grad_local, grad_global).
  std::pair<Tensor, Tensor> backward(const Tensor& grad_output);
  void collect_parameters(std::vector<Parameter*>& out);

  std::size_t concat_width() const noexcept { return local_ + global_; }
  std::size_t out_channels() const noexcept { return out_; }
  const std::string& name() const noexcept { return name_; }
  Parameter& local_weight() noexcept { return w_local_; }
  Parameter& global_weight() noexcept { return w_global_; }
  Parameter& bias() noexcept { return bias_; }

 private:
  std::string name_;
  std::size_t local_, global_, out_;
  Parameter w_local_;   // [out, local]
  Parameter w_global_;  // [out, global]
  Parameter bias_;
  Tensor local_input_, global_input_;
};

}  // namespace pcc::nn
