#include "pcc/models/decoders.hpp"

#include "pcc/error.hpp"

#include <random>

namespace pcc {

MlpDecoder::MlpDecoder(std::size_t feature_dim, const std::vector<std::size_t>& hidden,
                       std::size_t points, Rng& rng)
    : points_(points), net_("decoder") {
  net_.add<nn::FullyConnected>("decoder.l1.fc", feature_dim, hidden.at(0), rng);
  net_.add<nn::ReLU>("decoder.l1.relu");
  net_.add<nn::FullyConnected>("decoder.l2.fc", hidden[0], hidden.at(1), rng);
  net_.add<nn::ReLU>("decoder.l2.relu");
  net_.add<nn::FullyConnected>("decoder.l3.fc", hidden[1], points * 3, rng);
}

nn::Tensor MlpDecoder::decode(const nn::Tensor& feature, Seed) {
  const nn::Tensor flat = net_.forward(feature);
  const std::size_t batch = flat.dim(0);
  nn::Tensor out({batch, 3, points_});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t m = 0; m < points_; ++m) {
      for (std::size_t d = 0; d < 3; ++d) out.at(b, d, m) = flat.at(b, m * 3 + d);
    }
  }
  return out;
}

nn::Tensor MlpDecoder::backward(const nn::Tensor& grad_points) {
  const std::size_t batch = grad_points.dim(0);
  nn::Tensor flat({batch, points_ * 3});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t m = 0; m < points_; ++m) {
      for (std::size_t d = 0; d < 3; ++d) flat.at(b, m * 3 + d) = grad_points.at(b, d, m);
    }
  }
  return net_.backward(flat);
}

// ---------------------------------------------------------------------------

MorphingNetwork::MorphingNetwork(const std::string& name, std::size_t feature_dim,
                                 const std::vector<std::size_t>& hidden, Rng& rng)
    : first_(name + ".l1.linear", 2, feature_dim, hidden.at(0), rng), rest_(name) {
  rest_.add<nn::BatchNorm>(name + ".l1.bn", hidden[0]);
  rest_.add<nn::ReLU>(name + ".l1.relu");
  rest_.add<nn::SharedLinear>(name + ".l2.linear", hidden[0], hidden.at(1), rng);
  rest_.add<nn::BatchNorm>(name + ".l2.bn", hidden[1]);
  rest_.add<nn::ReLU>(name + ".l2.relu");
  rest_.add<nn::SharedLinear>(name + ".l3.linear", hidden[1], hidden.at(2), rng);
  rest_.add<nn::BatchNorm>(name + ".l3.bn", hidden[2]);
  rest_.add<nn::ReLU>(name + ".l3.relu");
  rest_.add<nn::SharedLinear>(name + ".l4.linear", hidden[2], 3, rng);
  rest_.add<nn::Tanh>(name + ".l4.tanh");
}

nn::Tensor MorphingNetwork::forward(const nn::Tensor& uv, const nn::Tensor& feature) {
  return rest_.forward(first_.forward(uv, feature));
}

nn::Tensor MorphingNetwork::backward(const nn::Tensor& grad_points) {
  return first_.backward(rest_.backward(grad_points)).second;
}

void MorphingNetwork::collect_parameters(std::vector<nn::Parameter*>& out) {
  first_.collect_parameters(out);
  rest_.collect_parameters(out);
}

void MorphingNetwork::collect_buffers(std::vector<nn::Buffer>& out) { rest_.collect_buffers(out); }

void MorphingNetwork::set_training(bool training) { rest_.set_training(training); }

MorphingDecoder::MorphingDecoder(std::size_t feature_dim, const std::vector<std::size_t>& hidden,
                                 std::size_t points, std::size_t networks, Rng& rng)
    : points_(points) {
  if (networks == 0 || points % networks != 0) {
    throw InvalidArgument("morphing decoder: " + std::to_string(points) +
                          " points are not divisible by " + std::to_string(networks) +
                          " networks");
  }
  for (std::size_t k = 0; k < networks; ++k) {
    nets_.push_back(std::make_unique<MorphingNetwork>("decoder.morph" + std::to_string(k),
                                                      feature_dim, hidden, rng));
  }
}

nn::Tensor MorphingDecoder::decode(const nn::Tensor& feature, Seed seed) {
  nn::expect_rank(feature, 2, "morphing decoder");
  const std::size_t batch = feature.dim(0);
  const std::size_t per_net = points_per_network();
  nn::Tensor out({batch, 3, points_});
  samples_.assign(nets_.size(), nn::Tensor());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < nets_.size(); ++k) {
    Rng rng(derive_seed(seed, {k}));
    nn::Tensor uv({batch, 2, per_net});
    for (auto& v : uv.values()) v = static_cast<nn::Real>(unit(rng));
    const nn::Tensor pts = nets_[k]->forward(uv, feature);
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t i = 0; i < per_net; ++i) out.at(b, d, k * per_net + i) = pts.at(b, d, i);
      }
    }
    samples_[k] = std::move(uv);
  }
  return out;
}

nn::Tensor MorphingDecoder::backward(const nn::Tensor& grad_points) {
  const std::size_t batch = grad_points.dim(0);
  const std::size_t per_net = points_per_network();
  nn::Tensor grad_feature;
  for (std::size_t k = 0; k < nets_.size(); ++k) {
    nn::Tensor g({batch, 3, per_net});
    for (std::size_t b = 0; b < batch; ++b) {
      for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t i = 0; i < per_net; ++i) g.at(b, d, i) = grad_points.at(b, d, k * per_net + i);
      }
    }
    nn::Tensor gf = nets_[k]->backward(g);
    if (k == 0) {
      grad_feature = std::move(gf);
    } else {
      grad_feature += gf;
    }
  }
  return grad_feature;
}

void MorphingDecoder::collect_parameters(std::vector<nn::Parameter*>& out) {
  for (auto& n : nets_) n->collect_parameters(out);
}

void MorphingDecoder::collect_buffers(std::vector<nn::Buffer>& out) {
  for (auto& n : nets_) n->collect_buffers(out);
}

void MorphingDecoder::set_training(bool training) {
  for (auto& n : nets_) n->set_training(training);
}

}  // namespace pcc
