#include "pcc/models/encoder.hpp"

#include "pcc/error.hpp"
#include "pcc/nn/batch_norm.hpp"

namespace pcc {

MpnEncoder::MpnEncoder(const std::vector<std::size_t>& widths, std::size_t feature_dim, Rng& rng)
    : nn::Module("encoder"), feature_dim_(feature_dim), net_("encoder") {
  net_.add<nn::SharedLinear>("encoder.l1.linear", 3, widths.at(0), rng);
  net_.add<nn::BatchNorm>("encoder.l1.bn", widths[0]);
  net_.add<nn::ReLU>("encoder.l1.relu");
  net_.add<nn::SharedLinear>("encoder.l2.linear", widths[0], widths.at(1), rng);
  net_.add<nn::BatchNorm>("encoder.l2.bn", widths[1]);
  net_.add<nn::ReLU>("encoder.l2.relu");
  net_.add<nn::SharedLinear>("encoder.l3.linear", widths[1], widths.at(2), rng);
  net_.add<nn::BatchNorm>("encoder.l3.bn", widths[2]);
  net_.add<nn::MaxPoolPoints>("encoder.pool");
  net_.add<nn::FullyConnected>("encoder.l4.fc", widths[2], feature_dim, rng);
}

nn::Tensor MpnEncoder::forward(const nn::Tensor& points) {
  nn::expect_rank(points, 3, "encoder");
  if (points.dim(1) != 3) {
    throw ShapeError("encoder expects 3 input channels, got " + nn::shape_string(points.shape()));
  }
  return net_.forward(points);
}

nn::Tensor MpnEncoder::backward(const nn::Tensor& grad_feature) { return net_.backward(grad_feature); }

}  // namespace pcc
