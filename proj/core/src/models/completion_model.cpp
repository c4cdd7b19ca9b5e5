#include "pcc/models/completion_model.hpp"

#include "pcc/error.hpp"

namespace pcc {

nn::Tensor tensor_from_clouds(const std::vector<PointCloud>& clouds) {
  if (clouds.empty()) throw ShapeError("cannot batch zero clouds");
  const std::size_t n = clouds.front().size();
  nn::Tensor t({clouds.size(), 3, n});
  for (std::size_t b = 0; b < clouds.size(); ++b) {
    if (clouds[b].size() != n) throw ShapeError("batched clouds must have equal sizes");
    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < 3; ++d) t.at(b, static_cast<std::size_t>(d), i) = static_cast<nn::Real>(clouds[b][i][d]);
    }
  }
  return t;
}

nn::Tensor tensor_from_cloud(const PointCloud& cloud) { return tensor_from_clouds({cloud}); }

PointCloud cloud_from_tensor(const nn::Tensor& points, std::size_t batch_index) {
  nn::expect_rank(points, 3, "cloud_from_tensor");
  const std::size_t n = points.dim(2);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    cloud.points.emplace_back(points.at(batch_index, 0, i), points.at(batch_index, 1, i),
                              points.at(batch_index, 2, i));
  }
  return cloud;
}

CompletionModel::CompletionModel(const ModelConfig& config, Seed init_seed) : config_(config) {
  config_.validate();
  Rng rng(init_seed);
  encoder_ = std::make_unique<MpnEncoder>(config_.encoder_widths, config_.feature_dim, rng);
  if (config_.decoder == DecoderKind::kMlp) {
    decoder_ = std::make_unique<MlpDecoder>(config_.feature_dim, config_.mlp_hidden,
                                            config_.missing_points, rng);
  } else {
    decoder_ = std::make_unique<MorphingDecoder>(config_.feature_dim, config_.morph_hidden,
                                                 config_.missing_points, config_.morph_networks,
                                                 rng);
  }
  refiner_ = std::make_unique<PointRefiner>(config_.refiner_widths, config_.refiner_head, rng);
}

namespace {

MergeResult reuse_selection(const PointCloud& partial, const PointCloud& predicted,
                            const MergeResult& selection) {
  if (selection.partial_size != partial.size()) {
    throw ShapeError("fixed selection was made for a different partial size");
  }
  MergeResult out;
  out.partial_size = partial.size();
  out.source_indices = selection.source_indices;
  out.merged.points.points.reserve(out.source_indices.size());
  for (std::size_t src : out.source_indices) {
    const bool predicted_point = src >= partial.size();
    if (predicted_point && src - partial.size() >= predicted.size()) {
      throw ShapeError("fixed selection index out of range");
    }
    out.merged.points.points.push_back(predicted_point ? predicted[src - partial.size()] : partial[src]);
    out.merged.labels.push_back(predicted_point ? 1 : 0);
  }
  return out;
}

}  // namespace

CompletionPass CompletionModel::forward(const nn::Tensor& partial, Seed pass_seed,
                                        const std::vector<MergeResult>* selection) {
  nn::expect_rank(partial, 3, "completion model");
  if (partial.dim(1) != 3) {
    throw ShapeError("completion model expects [B, 3, N] input, got " +
                     nn::shape_string(partial.shape()));
  }
  const std::size_t batch = partial.dim(0), n_partial = partial.dim(2);
  const std::size_t n_out = config_.output_points;
  const std::size_t m = config_.missing_points;

  CompletionPass pass;
  const nn::Tensor feature = encoder_->forward(partial);
  pass.missing_pred = decoder_->decode(feature, derive_seed(pass_seed, {0}));
  if (pass.missing_pred.shape() != nn::Shape{batch, 3, m}) {
    throw ShapeError("decoder produced " + nn::shape_string(pass.missing_pred.shape()));
  }

  pass.refiner_input = nn::Tensor({batch, 4, n_out});
  pass.merges.reserve(batch);
  if (selection && selection->size() != batch) {
    throw ShapeError("fixed selection covers " + std::to_string(selection->size()) +
                     " samples, batch has " + std::to_string(batch));
  }
  for (std::size_t b = 0; b < batch; ++b) {
    const PointCloud partial_b = cloud_from_tensor(partial, b);
    const PointCloud predicted_b = cloud_from_tensor(pass.missing_pred, b);
    MergeResult merge =
        selection ? reuse_selection(partial_b, predicted_b, (*selection)[b])
                  : merge_and_sample(partial_b, predicted_b, n_out, config_.sampling,
                                     derive_seed(pass_seed, {1, b}), config_.density_sigma);
    if (merge.merged.size() != n_out || merge.source_indices.size() != n_out) {
      throw ShapeError("merge produced " + std::to_string(merge.merged.size()) + " points");
    }
    for (std::size_t i = 0; i < n_out; ++i) {
      const bool predicted = merge.source_indices[i] >= n_partial;
      if (merge.merged.labels[i] != (predicted ? 1 : 0)) {
        throw ShapeError("merge label disagrees with its source index");
      }
      for (std::size_t d = 0; d < 3; ++d) {
        pass.refiner_input.at(b, d, i) = static_cast<nn::Real>(merge.merged.points[i][static_cast<Eigen::Index>(d)]);
      }
      pass.refiner_input.at(b, 3, i) = predicted ? nn::Real(1) : nn::Real(0);
    }
    pass.merges.push_back(std::move(merge));
  }

  pass.displacement = refiner_->forward(pass.refiner_input);
  if (pass.displacement.shape() != nn::Shape{batch, 3, n_out}) {
    throw ShapeError("refiner produced " + nn::shape_string(pass.displacement.shape()));
  }
  pass.refined = nn::Tensor({batch, 3, n_out});
  const auto mu = static_cast<nn::Real>(config_.mu);
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t d = 0; d < 3; ++d) {
      for (std::size_t i = 0; i < n_out; ++i) {
        pass.refined.at(b, d, i) = pass.refiner_input.at(b, d, i) + mu * pass.displacement.at(b, d, i);
      }
    }
  }
  return pass;
}

void CompletionModel::backward(const CompletionPass& pass, const nn::Tensor& grad_missing,
                               const nn::Tensor& grad_refined) {
  if (grad_missing.shape() != pass.missing_pred.shape() ||
      grad_refined.shape() != pass.refined.shape()) {
    throw ShapeError("completion backward: gradient shapes do not match the forward pass");
  }
  const std::size_t batch = pass.refined.dim(0), n_out = pass.refined.dim(2);
  const auto mu = static_cast<nn::Real>(config_.mu);

  nn::Tensor grad_disp = grad_refined;
  for (auto& g : grad_disp.values()) g *= mu;
  const nn::Tensor grad_input = refiner_->backward(grad_disp);

  nn::Tensor grad_pred = grad_missing;
  for (std::size_t b = 0; b < batch; ++b) {
    const MergeResult& merge = pass.merges[b];
    for (std::size_t i = 0; i < n_out; ++i) {
      const std::size_t src = merge.source_indices[i];
      if (src < merge.partial_size) continue;
      for (std::size_t d = 0; d < 3; ++d) {
        grad_pred.at(b, d, src - merge.partial_size) += grad_refined.at(b, d, i) + grad_input.at(b, d, i);
      }
    }
  }
  encoder_->backward(decoder_->backward(grad_pred));
}

CompletionResult CompletionModel::complete(const PointCloud& partial, Seed seed) {
  CompletionPass pass = forward(tensor_from_cloud(partial), seed);
  CompletionResult result;
  result.missing_pred = cloud_from_tensor(pass.missing_pred, 0);
  result.merged = std::move(pass.merges.front().merged);
  result.refined = cloud_from_tensor(pass.refined, 0);
  return result;
}

std::vector<nn::Parameter*> CompletionModel::parameters() {
  std::vector<nn::Parameter*> out;
  encoder_->collect_parameters(out);
  decoder_->collect_parameters(out);
  refiner_->collect_parameters(out);
  return out;
}

std::vector<nn::Buffer> CompletionModel::buffers() {
  std::vector<nn::Buffer> out;
  encoder_->collect_buffers(out);
  decoder_->collect_buffers(out);
  refiner_->collect_buffers(out);
  return out;
}

void CompletionModel::zero_grad() { nn::zero_grad(parameters()); }

void CompletionModel::set_training(bool training) {
  training_ = training;
  encoder_->set_training(training);
  decoder_->set_training(training);
  refiner_->set_training(training);
}

void CompletionModel::set_mu(double mu) {
  if (!(mu >= 0.0)) throw InvalidArgument("mu must be non-negative");
  config_.mu = mu;
}

}  // namespace pcc
