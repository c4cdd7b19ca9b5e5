#pragma once

#include "pcc/nn/batch_norm.hpp"
#include "pcc/nn/broadcast_linear.hpp"
#include "pcc/nn/layers.hpp"
#include "pcc/random.hpp"

#include <memory>
#include <vector>

namespace pcc {

/// Maps a global feature [B, F] to a predicted missing part [B, 3, M].
class Decoder {
 public:
  virtual ~Decoder() = default;
  virtual nn::Tensor decode(const nn::Tensor& feature, Seed seed) = 0;
  virtual nn::Tensor backward(const nn::Tensor& grad_points) = 0;
  virtual void collect_parameters(std::vector<nn::Parameter*>& out) = 0;
  virtual void collect_buffers(std::vector<nn::Buffer>& out) = 0;
  virtual void set_training(bool training) = 0;
  virtual std::size_t output_points() const = 0;
};

/// Three fully-connected layers (ReLU after the first two); the last output of size M*3 is
/// read point-major as M xyz triples.
class MlpDecoder : public Decoder {
 public:
  MlpDecoder(std::size_t feature_dim, const std::vector<std::size_t>& hidden, std::size_t points,
             Rng& rng);

  nn::Tensor decode(const nn::Tensor& feature, Seed seed = 0) override;
  nn::Tensor backward(const nn::Tensor& grad_points) override;
  void collect_parameters(std::vector<nn::Parameter*>& out) override { net_.collect_parameters(out); }
  void collect_buffers(std::vector<nn::Buffer>&) override {}
  void set_training(bool) override {}
  std::size_t output_points() const override { return points_; }

  nn::Sequential& network() noexcept { return net_; }

 private:
  std::size_t points_;
  nn::Sequential net_;
};

/// One morphing network: unit-square samples + broadcast feature -> 3D points in [-1, 1]^3.
class MorphingNetwork {
 public:
  MorphingNetwork(const std::string& name, std::size_t feature_dim,
                  const std::vector<std::size_t>& hidden, Rng& rng);

  /// uv: [B, 2, P], feature: [B, F] -> [B, 3, P]
  nn::Tensor forward(const nn::Tensor& uv, const nn::Tensor& feature);
  /// Returns the gradient with respect to the feature.
  nn::Tensor backward(const nn::Tensor& grad_points);
  void collect_parameters(std::vector<nn::Parameter*>& out);
  void collect_buffers(std::vector<nn::Buffer>& out);
  void set_training(bool training);

  std::size_t input_width() const noexcept { return first_.concat_width(); }

 private:
  nn::BroadcastLinear first_;
  nn::Sequential rest_;  // BN, ReLU, then shared-linear blocks, final tanh
};

/// K morphing networks, each producing M/K points from fresh unit-square samples per forward.
class MorphingDecoder : public Decoder {
 public:
  MorphingDecoder(std::size_t feature_dim, const std::vector<std::size_t>& hidden,
                  std::size_t points, std::size_t networks, Rng& rng);

  nn::Tensor decode(const nn::Tensor& feature, Seed seed) override;
  nn::Tensor backward(const nn::Tensor& grad_points) override;
  void collect_parameters(std::vector<nn::Parameter*>& out) override;
  void collect_buffers(std::vector<nn::Buffer>& out) override;
  void set_training(bool training) override;
  std::size_t output_points() const override { return points_; }

  std::size_t networks() const noexcept { return nets_.size(); }
  std::size_t points_per_network() const noexcept { return points_ / nets_.size(); }
  MorphingNetwork& network(std::size_t k) { return *nets_.at(k); }
  /// Unit-square samples [B, 2, M/K] drawn for each network in the last forward.
  const std::vector<nn::Tensor>& last_samples() const noexcept { return samples_; }

 private:
  std::size_t points_;
  std::vector<std::unique_ptr<MorphingNetwork>> nets_;
  std::vector<nn::Tensor> samples_;
};

}  // namespace pcc
