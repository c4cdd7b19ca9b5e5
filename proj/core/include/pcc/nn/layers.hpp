#pragma once

#include "pcc/nn/module.hpp"
#include "pcc/random.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace pcc::nn {

/// Kernel-size-1 1D convolution: out[b,:,i] = W * in[b,:,i] + bias, on [B, C_in, N].
class SharedLinear : public Module {
 public:
  SharedLinear(std::string name, std::size_t in_channels, std::size_t out_channels, Rng& rng);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  void collect_parameters(std::vector<Parameter*>& out) override;

  std::size_t in_channels() const noexcept { return in_; }
  std::size_t out_channels() const noexcept { return out_; }
  Parameter& weight() noexcept { return weight_; }
  Parameter& bias() noexcept { return bias_; }

 private:
  std::size_t in_, out_;
  Parameter weight_;  // [out, in]
  Parameter bias_;    // [out]
  Tensor input_;
};

/// Affine map on [B, D_in] -> [B, D_out].
class FullyConnected : public Module {
 public:
  FullyConnected(std::string name, std::size_t in_features, std::size_t out_features, Rng& rng);

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  void collect_parameters(std::vector<Parameter*>& out) override;

  Parameter& weight() noexcept { return weight_; }
  Parameter& bias() noexcept { return bias_; }

 private:
  std::size_t in_, out_;
  Parameter weight_;  // [out, in]
  Parameter bias_;
  Tensor input_;
};

class ReLU : public Module {
 public:
  explicit ReLU(std::string name) : Module(std::move(name)) {}
  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;

 private:
  Tensor output_;
};

class Tanh : public Module {
 public:
  explicit Tanh(std::string name) : Module(std::move(name)) {}
  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;

 private:
  Tensor output_;
};

/// Channel-wise max over points: [B, C, N] -> [B, C]. Ties resolve to the first index.
class MaxPoolPoints : public Module {
 public:
  explicit MaxPoolPoints(std::string name) : Module(std::move(name)) {}
  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;

  /// argmax point index per (batch, channel) from the last forward.
  const std::vector<std::uint32_t>& argmax() const noexcept { return argmax_; }

 private:
  Shape input_shape_;
  std::vector<std::uint32_t> argmax_;
};

/// Runs child modules in order.
class Sequential : public Module {
 public:
  explicit Sequential(std::string name) : Module(std::move(name)) {}

  template <typename M, typename... Args>
  M& add(Args&&... args) {
    auto m = std::make_unique<M>(std::forward<Args>(args)...);
    M& ref = *m;
    layers_.push_back(std::move(m));
    return ref;
  }

  Tensor forward(const Tensor& input) override;
  Tensor backward(const Tensor& grad_output) override;
  void collect_parameters(std::vector<Parameter*>& out) override;
  void collect_buffers(std::vector<Buffer>& out) override;
  void set_training(bool training) override;

  std::size_t size() const noexcept { return layers_.size(); }
  Module& layer(std::size_t i) { return *layers_.at(i); }

 private:
  std::vector<std::unique_ptr<Module>> layers_;
};

}  // namespace pcc::nn
