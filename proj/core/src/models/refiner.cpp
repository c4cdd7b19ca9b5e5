#include "pcc/models/refiner.hpp"

#include "pcc/error.hpp"

namespace pcc {

PointRefiner::PointRefiner(const std::vector<std::size_t>& widths,
                           const std::vector<std::size_t>& head, Rng& rng)
    : nn::Module("refiner"),
      local_("refiner.l1"),
      global_("refiner.global"),
      fuse_("refiner.l5.linear", widths.at(0), widths.at(2), head.at(0), rng),
      head_("refiner.head") {
  local_.add<nn::SharedLinear>("refiner.l1.linear", 4, widths[0], rng);
  local_.add<nn::BatchNorm>("refiner.l1.bn", widths[0]);
  local_.add<nn::ReLU>("refiner.l1.relu");

  global_.add<nn::SharedLinear>("refiner.l2.linear", widths[0], widths.at(1), rng);
  global_.add<nn::BatchNorm>("refiner.l2.bn", widths[1]);
  global_.add<nn::ReLU>("refiner.l2.relu");
  global_.add<nn::SharedLinear>("refiner.l3.linear", widths[1], widths[2], rng);
  global_.add<nn::BatchNorm>("refiner.l3.bn", widths[2]);
  global_.add<nn::MaxPoolPoints>("refiner.l4.pool");

  head_.add<nn::BatchNorm>("refiner.l5.bn", head[0]);
  head_.add<nn::ReLU>("refiner.l5.relu");
  head_.add<nn::SharedLinear>("refiner.l6.linear", head[0], head.at(1), rng);
  head_.add<nn::BatchNorm>("refiner.l6.bn", head[1]);
  head_.add<nn::ReLU>("refiner.l6.relu");
  head_.add<nn::SharedLinear>("refiner.l7.linear", head[1], head.at(2), rng);
  head_.add<nn::BatchNorm>("refiner.l7.bn", head[2]);
  head_.add<nn::ReLU>("refiner.l7.relu");
  output_layer_ = &head_.add<nn::SharedLinear>("refiner.l8.linear", head[2], 3, rng);
  head_.add<nn::Tanh>("refiner.l8.tanh");
}

nn::Tensor PointRefiner::forward(const nn::Tensor& labeled) {
  nn::expect_rank(labeled, 3, "refiner");
  if (labeled.dim(1) != 4) {
    throw ShapeError("refiner expects 4 input channels (xyz + label), got " +
                     nn::shape_string(labeled.shape()));
  }
  const std::size_t batch = labeled.dim(0), n = labeled.dim(2);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t i = 0; i < n; ++i) {
      const nn::Real l = labeled.at(b, 3, i);
      if (l != nn::Real(0) && l != nn::Real(1)) throw ShapeError("refiner label outside {0,1}");
    }
  }
  const nn::Tensor local = local_.forward(labeled);
  const nn::Tensor global = global_.forward(local);
  return head_.forward(fuse_.forward(local, global));
}

nn::Tensor PointRefiner::backward(const nn::Tensor& grad_displacement) {
  auto [grad_local, grad_global] = fuse_.backward(head_.backward(grad_displacement));
  grad_local += global_.backward(grad_global);
  return local_.backward(grad_local);
}

void PointRefiner::collect_parameters(std::vector<nn::Parameter*>& out) {
  local_.collect_parameters(out);
  global_.collect_parameters(out);
  fuse_.collect_parameters(out);
  head_.collect_parameters(out);
}

void PointRefiner::collect_buffers(std::vector<nn::Buffer>& out) {
  local_.collect_buffers(out);
  global_.collect_buffers(out);
  head_.collect_buffers(out);
}

void PointRefiner::set_training(bool training) {
  local_.set_training(training);
  global_.set_training(training);
  head_.set_training(training);
}

}  // namespace pcc
