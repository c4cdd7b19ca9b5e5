#pragma once

#include "pcc/nn/tensor.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pcc::nn {

/// Learned weights with their gradient and ADAM moment estimates.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;
  Tensor adam_m;
  Tensor adam_v;
  std::int64_t adam_step = 0;

  Parameter() = default;
  Parameter(std::string n, const Shape& shape)
      : name(std::move(n)), value(shape), grad(shape), adam_m(shape), adam_v(shape) {}
};

/// Non-learned persistent state (batch-norm running statistics).
struct Buffer {
  std::string name;
  Tensor* tensor;
};

/// A differentiable layer. forward() caches what backward() needs, so one instance
/// serves one forward/backward pair at a time. backward() accumulates parameter gradients
/// and returns the gradient with respect to the forward input.
class Module {
 public:
  explicit Module(std::string name) : name_(std::move(name)) {}
  virtual ~Module() = default;
  Module(const Module&) = delete;
  Module& operator=(const Module&) = delete;

  virtual Tensor forward(const Tensor& input) = 0;
  virtual Tensor backward(const Tensor& grad_output) = 0;

  virtual void collect_parameters(std::vector<Parameter*>& /*out*/) {}
  virtual void collect_buffers(std::vector<Buffer>& /*out*/) {}
  virtual void set_training(bool /*training*/) {}

  const std::string& name() const noexcept { return name_; }

  std::vector<Parameter*> parameters() {
    std::vector<Parameter*> out;
    collect_parameters(out);
    return out;
  }

 private:
  std::string name_;
};

void zero_grad(const std::vector<Parameter*>& params);

}  // namespace pcc::nn
