#include "pcc/nn/broadcast_linear.hpp"

#include "eigen_maps.hpp"
#include "pcc/error.hpp"
#include "pcc/nn/init.hpp"

namespace pcc::nn {

using detail::as_matrix;
using detail::as_vector;

BroadcastLinear::BroadcastLinear(std::string name, std::size_t local_channels,
                                 std::size_t global_channels, std::size_t out_channels, Rng& rng)
    : name_(std::move(name)),
      local_(local_channels),
      global_(global_channels),
      out_(out_channels),
      w_local_(name_ + ".weight_local", {out_channels, local_channels}),
      w_global_(name_ + ".weight_global", {out_channels, global_channels}),
      bias_(name_ + ".bias", {out_channels}) {
  kaiming_uniform(w_local_.value, local_, rng);
  kaiming_uniform(w_global_.value, global_, rng);
}

Tensor BroadcastLinear::forward(const Tensor& local, const Tensor& global) {
  expect_rank(local, 3, "BroadcastLinear local input");
  expect_rank(global, 2, "BroadcastLinear global input");
  const std::size_t batch = local.dim(0), n = local.dim(2);
  if (local.dim(1) != local_ || global.dim(0) != batch || global.dim(1) != global_) {
    throw ShapeError(name_ + ": input shapes " + shape_string(local.shape()) + " and " +
                     shape_string(global.shape()) + " do not match the layer");
  }
  local_input_ = local;
  global_input_ = global;

  // per-sample offset W_global * g + bias, shared by every point
  Tensor offset({batch, out_});
  auto off = as_matrix(offset, 0, batch, out_);
  off.noalias() = as_matrix(global, 0, batch, global_) *
                  as_matrix(w_global_.value, 0, out_, global_).transpose();
  off.rowwise() += as_vector(bias_.value).transpose();

  Tensor out({batch, out_, n});
  const auto wl = as_matrix(w_local_.value, 0, out_, local_);
  for (std::size_t b = 0; b < batch; ++b) {
    auto y = as_matrix(out, b * out_ * n, out_, n);
    y.noalias() = wl * as_matrix(local, b * local_ * n, local_, n);
    y.colwise() += off.row(static_cast<Eigen::Index>(b)).transpose();
  }
  return out;
}

std::pair<Tensor, Tensor> BroadcastLinear::backward(const Tensor& grad_output) {
  const std::size_t batch = local_input_.dim(0), n = local_input_.dim(2);
  if (grad_output.shape() != Shape{batch, out_, n}) {
    throw ShapeError(name_ + ": gradient shape " + shape_string(grad_output.shape()));
  }
  // summing dY over points gives the gradient of the broadcast offset
  Tensor point_sum({batch, out_});
  Tensor grad_local({batch, local_, n});
  const auto wl = as_matrix(w_local_.value, 0, out_, local_);
  auto dwl = as_matrix(w_local_.grad, 0, out_, local_);
  for (std::size_t b = 0; b < batch; ++b) {
    const auto dy = as_matrix(grad_output, b * out_ * n, out_, n);
    dwl.noalias() += dy * as_matrix(local_input_, b * local_ * n, local_, n).transpose();
    as_matrix(point_sum, 0, batch, out_).row(static_cast<Eigen::Index>(b)) =
        dy.rowwise().sum().transpose();
    as_matrix(grad_local, b * local_ * n, local_, n).noalias() = wl.transpose() * dy;
  }
  const auto ds = as_matrix(point_sum, 0, batch, out_);
  as_vector(bias_.grad) += ds.colwise().sum().transpose();
  as_matrix(w_global_.grad, 0, out_, global_).noalias() +=
      ds.transpose() * as_matrix(global_input_, 0, batch, global_);
  Tensor grad_global({batch, global_});
  as_matrix(grad_global, 0, batch, global_).noalias() =
      ds * as_matrix(w_global_.value, 0, out_, global_);
  return {std::move(grad_local), std::move(grad_global)};
}

void BroadcastLinear::collect_parameters(std::vector<Parameter*>& out) {
  out.push_back(&w_local_);
  out.push_back(&w_global_);
  out.push_back(&bias_);
}

}  // namespace pcc::nn
