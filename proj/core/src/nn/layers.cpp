#include "pcc/nn/layers.hpp"

#include "eigen_maps.hpp"
#include "pcc/error.hpp"
#include "pcc/nn/init.hpp"

#include <cmath>
#include <random>

namespace pcc::nn {

using detail::as_matrix;
using detail::as_vector;

void zero_grad(const std::vector<Parameter*>& params) {
  for (auto* p : params) p->grad.zero();
}

void kaiming_uniform(Tensor& weights, std::size_t fan_in, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (auto& w : weights.values()) w = static_cast<Real>(dist(rng));
}

// ---------------------------------------------------------------------------

SharedLinear::SharedLinear(std::string name, std::size_t in_channels, std::size_t out_channels,
                           Rng& rng)
    : Module(std::move(name)),
      in_(in_channels),
      out_(out_channels),
      weight_(this->name() + ".weight", {out_channels, in_channels}),
      bias_(this->name() + ".bias", {out_channels}) {
  kaiming_uniform(weight_.value, in_, rng);
}

Tensor SharedLinear::forward(const Tensor& input) {
  expect_rank(input, 3, "SharedLinear");
  if (input.dim(1) != in_) {
    throw ShapeError(name() + ": expected " + std::to_string(in_) + " input channels, got " +
                     shape_string(input.shape()));
  }
  const std::size_t batch = input.dim(0), n = input.dim(2);
  input_ = input;
  Tensor out({batch, out_, n});
  const auto w = as_matrix(weight_.value, 0, out_, in_);
  const auto b = as_vector(bias_.value);
  for (std::size_t bi = 0; bi < batch; ++bi) {
    auto y = as_matrix(out, bi * out_ * n, out_, n);
    y.noalias() = w * as_matrix(input, bi * in_ * n, in_, n);
    y.colwise() += b;
  }
  return out;
}

Tensor SharedLinear::backward(const Tensor& grad_output) {
  const std::size_t batch = input_.dim(0), n = input_.dim(2);
  if (grad_output.shape() != Shape{batch, out_, n}) {
    throw ShapeError(name() + ": gradient shape " + shape_string(grad_output.shape()));
  }
  Tensor grad_input({batch, in_, n});
  const auto w = as_matrix(weight_.value, 0, out_, in_);
  auto dw = as_matrix(weight_.grad, 0, out_, in_);
  auto db = as_vector(bias_.grad);
  for (std::size_t bi = 0; bi < batch; ++bi) {
    const auto dy = as_matrix(grad_output, bi * out_ * n, out_, n);
    dw.noalias() += dy * as_matrix(input_, bi * in_ * n, in_, n).transpose();
    db += dy.rowwise().sum();
    as_matrix(grad_input, bi * in_ * n, in_, n).noalias() = w.transpose() * dy;
  }
  return grad_input;
}

void SharedLinear::collect_parameters(std::vector<Parameter*>& out) {
  out.push_back(&weight_);
  out.push_back(&bias_);
}

// ---------------------------------------------------------------------------

FullyConnected::FullyConnected(std::string name, std::size_t in_features,
                               std::size_t out_features, Rng& rng)
    : Module(std::move(name)),
      in_(in_features),
      out_(out_features),
      weight_(this->name() + ".weight", {out_features, in_features}),
      bias_(this->name() + ".bias", {out_features}) {
  kaiming_uniform(weight_.value, in_, rng);
}

Tensor FullyConnected::forward(const Tensor& input) {
  expect_rank(input, 2, "FullyConnected");
  if (input.dim(1) != in_) {
    throw ShapeError(name() + ": expected " + std::to_string(in_) + " input features, got " +
                     shape_string(input.shape()));
  }
  const std::size_t batch = input.dim(0);
  input_ = input;
  Tensor out({batch, out_});
  auto y = as_matrix(out, 0, batch, out_);
  y.noalias() = as_matrix(input, 0, batch, in_) * as_matrix(weight_.value, 0, out_, in_).transpose();
  y.rowwise() += as_vector(bias_.value).transpose();
  return out;
}

Tensor FullyConnected::backward(const Tensor& grad_output) {
  const std::size_t batch = input_.dim(0);
  if (grad_output.shape() != Shape{batch, out_}) {
    throw ShapeError(name() + ": gradient shape " + shape_string(grad_output.shape()));
  }
  const auto dy = as_matrix(grad_output, 0, batch, out_);
  as_matrix(weight_.grad, 0, out_, in_).noalias() += dy.transpose() * as_matrix(input_, 0, batch, in_);
  as_vector(bias_.grad) += dy.colwise().sum().transpose();
  Tensor grad_input({batch, in_});
  as_matrix(grad_input, 0, batch, in_).noalias() = dy * as_matrix(weight_.value, 0, out_, in_);
  return grad_input;
}

void FullyConnected::collect_parameters(std::vector<Parameter*>& out) {
  out.push_back(&weight_);
  out.push_back(&bias_);
}

// ---------------------------------------------------------------------------

Tensor ReLU::forward(const Tensor& input) {
  output_ = input;
  for (auto& v : output_.values()) v = v > Real(0) ? v : Real(0);
  return output_;
}

Tensor ReLU::backward(const Tensor& grad_output) {
  Tensor grad = grad_output;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!(output_[i] > Real(0))) grad[i] = Real(0);
  }
  return grad;
}

Tensor Tanh::forward(const Tensor& input) {
  output_ = input;
  for (auto& v : output_.values()) v = std::tanh(v);
  return output_;
}

Tensor Tanh::backward(const Tensor& grad_output) {
  Tensor grad = grad_output;
  for (std::size_t i = 0; i < grad.size(); ++i) grad[i] *= Real(1) - output_[i] * output_[i];
  return grad;
}

// ---------------------------------------------------------------------------

Tensor MaxPoolPoints::forward(const Tensor& input) {
  expect_rank(input, 3, "MaxPoolPoints");
  const std::size_t batch = input.dim(0), channels = input.dim(1), n = input.dim(2);
  if (n == 0) throw ShapeError(name() + ": cannot pool over zero points");
  input_shape_ = input.shape();
  Tensor out({batch, channels});
  argmax_.assign(batch * channels, 0);
  for (std::size_t bc = 0; bc < batch * channels; ++bc) {
    const Real* row = input.data() + bc * n;
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (row[i] > row[best]) best = i;
    }
    argmax_[bc] = static_cast<std::uint32_t>(best);
    out[bc] = row[best];
  }
  return out;
}

Tensor MaxPoolPoints::backward(const Tensor& grad_output) {
  const std::size_t n = input_shape_.at(2);
  Tensor grad(input_shape_);
  for (std::size_t bc = 0; bc < argmax_.size(); ++bc) grad[bc * n + argmax_[bc]] = grad_output[bc];
  return grad;
}

// ---------------------------------------------------------------------------

Tensor Sequential::forward(const Tensor& input) {
  Tensor x = input;
  for (auto& layer : layers_) x = layer->forward(x);
  return x;
}

Tensor Sequential::backward(const Tensor& grad_output) {
  Tensor g = grad_output;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
  return g;
}

void Sequential::collect_parameters(std::vector<Parameter*>& out) {
  for (auto& layer : layers_) layer->collect_parameters(out);
}

void Sequential::collect_buffers(std::vector<Buffer>& out) {
  for (auto& layer : layers_) layer->collect_buffers(out);
}

void Sequential::set_training(bool training) {
  for (auto& layer : layers_) layer->set_training(training);
}

}  // namespace pcc::nn
