#include "pcc/nn/batch_norm.hpp"

#include "pcc/error.hpp"

#include <cmath>

namespace pcc::nn {

BatchNorm::BatchNorm(std::string name, std::size_t channels, Real momentum, Real eps)
    : Module(std::move(name)),
      channels_(channels),
      momentum_(momentum),
      eps_(eps),
      gamma_(this->name() + ".gamma", {channels}),
      beta_(this->name() + ".beta", {channels}),
      running_mean_({channels}, Real(0)),
      running_var_({channels}, Real(1)) {
  gamma_.value.fill(Real(1));
}

Tensor BatchNorm::forward(const Tensor& input) {
  if (input.rank() != 2 && input.rank() != 3) {
    throw ShapeError(name() + ": expected [B, C] or [B, C, N], got " + shape_string(input.shape()));
  }
  if (input.dim(1) != channels_) {
    throw ShapeError(name() + ": expected " + std::to_string(channels_) + " channels, got " +
                     shape_string(input.shape()));
  }
  const std::size_t batch = input.dim(0);
  const std::size_t n = input.rank() == 3 ? input.dim(2) : 1;
  const std::size_t count = batch * n;
  if (training_ && count < 2) {
    throw ShapeError(name() + ": training mode needs at least 2 values per channel");
  }

  cached_training_ = training_;
  normalized_ = Tensor(input.shape());
  inv_std_.assign(channels_, Real(0));
  Tensor out(input.shape());

  for (std::size_t c = 0; c < channels_; ++c) {
    Real mean, var;
    if (training_) {
      double sum = 0.0;
      for (std::size_t b = 0; b < batch; ++b) {
        const Real* x = input.data() + (b * channels_ + c) * n;
        for (std::size_t i = 0; i < n; ++i) sum += x[i];
      }
      mean = static_cast<Real>(sum / static_cast<double>(count));
      double sq = 0.0;
      for (std::size_t b = 0; b < batch; ++b) {
        const Real* x = input.data() + (b * channels_ + c) * n;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = x[i] - mean;
          sq += d * d;
        }
      }
      var = static_cast<Real>(sq / static_cast<double>(count));
      const Real unbiased = static_cast<Real>(sq / static_cast<double>(count - 1));
      running_mean_[c] = (Real(1) - momentum_) * running_mean_[c] + momentum_ * mean;
      running_var_[c] = (Real(1) - momentum_) * running_var_[c] + momentum_ * unbiased;
    } else {
      mean = running_mean_[c];
      var = running_var_[c];
    }
    const Real inv_std = Real(1) / std::sqrt(var + eps_);
    inv_std_[c] = inv_std;
    const Real g = gamma_.value[c], bt = beta_.value[c];
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t off = (b * channels_ + c) * n;
      for (std::size_t i = 0; i < n; ++i) {
        const Real xhat = (input[off + i] - mean) * inv_std;
        normalized_[off + i] = xhat;
        out[off + i] = g * xhat + bt;
      }
    }
  }
  return out;
}

Tensor BatchNorm::backward(const Tensor& grad_output) {
  if (grad_output.shape() != normalized_.shape()) {
    throw ShapeError(name() + ": gradient shape " + shape_string(grad_output.shape()));
  }
  const std::size_t batch = normalized_.dim(0);
  const std::size_t n = normalized_.rank() == 3 ? normalized_.dim(2) : 1;
  const double count = static_cast<double>(batch * n);
  Tensor grad_input(normalized_.shape());

  for (std::size_t c = 0; c < channels_; ++c) {
    double sum_dy = 0.0, sum_dy_xhat = 0.0;
    for (std::size_t b = 0; b < batch; ++b) {
      const std::size_t off = (b * channels_ + c) * n;
      for (std::size_t i = 0; i < n; ++i) {
        sum_dy += grad_output[off + i];
        sum_dy_xhat += grad_output[off + i] * normalized_[off + i];
      }
    }
    gamma_.grad[c] += static_cast<Real>(sum_dy_xhat);
    beta_.grad[c] += static_cast<Real>(sum_dy);

    const Real scale = gamma_.value[c] * inv_std_[c];
    if (cached_training_) {
      const Real mean_dy = static_cast<Real>(sum_dy / count);
      const Real mean_dy_xhat = static_cast<Real>(sum_dy_xhat / count);
      for (std::size_t b = 0; b < batch; ++b) {
        const std::size_t off = (b * channels_ + c) * n;
        for (std::size_t i = 0; i < n; ++i) {
          grad_input[off + i] =
              scale * (grad_output[off + i] - mean_dy - normalized_[off + i] * mean_dy_xhat);
        }
      }
    } else {
      for (std::size_t b = 0; b < batch; ++b) {
        const std::size_t off = (b * channels_ + c) * n;
        for (std::size_t i = 0; i < n; ++i) grad_input[off + i] = scale * grad_output[off + i];
      }
    }
  }
  return grad_input;
}

void BatchNorm::collect_parameters(std::vector<Parameter*>& out) {
  out.push_back(&gamma_);
  out.push_back(&beta_);
}

void BatchNorm::collect_buffers(std::vector<Buffer>& out) {
  out.push_back({name() + ".running_mean", &running_mean_});
  out.push_back({name() + ".running_var", &running_var_});
}

}  // namespace pcc::nn
