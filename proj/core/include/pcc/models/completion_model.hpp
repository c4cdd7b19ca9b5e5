#pragma once

#include "pcc/geometry/point_cloud.hpp"
#include "pcc/geometry/sampling.hpp"
#include "pcc/models/decoders.hpp"
#include "pcc/models/encoder.hpp"
#include "pcc/models/model_config.hpp"
#include "pcc/models/refiner.hpp"
#include "pcc/nn/tensor.hpp"

#include <memory>
#include <vector>

namespace pcc {

/// [B, 3, N] tensor from B clouds of equal size.
nn::Tensor tensor_from_clouds(const std::vector<PointCloud>& clouds);
nn::Tensor tensor_from_cloud(const PointCloud& cloud);
PointCloud cloud_from_tensor(const nn::Tensor& points, std::size_t batch_index);

/// Everything one batched forward produced; backward() consumes it.
struct CompletionPass {
  nn::Tensor missing_pred;             // [B, 3, M]
  std::vector<MergeResult> merges;     // per sample: labeled merged cloud + source indices
  nn::Tensor refiner_input;            // [B, 4, output_points]
  nn::Tensor displacement;             // [B, 3, output_points]
  nn::Tensor refined;                  // [B, 3, output_points]
};

struct CompletionResult {
  PointCloud missing_pred;
  LabeledCloud merged;
  PointCloud refined;
};

/// Missing-part prediction, merge-and-sample, and refinement in one differentiable model.
class CompletionModel {
 public:
  CompletionModel(const ModelConfig& config, Seed init_seed);

  /// partial: [B, 3, N]. pass_seed drives unit-square sampling and the merge subsampling.
  /// With `selection`, its source indices are reused instead of running the sampler.
  CompletionPass forward(const nn::Tensor& partial, Seed pass_seed,
                         const std::vector<MergeResult>* selection = nullptr);

  /// Accumulates parameter gradients for dL/d(missing_pred) and dL/d(refined). The merge
  /// selection is held fixed: gradients on merged points route to the predicted points they
  /// were selected from; observed points carry no gradient.
  void backward(const CompletionPass& pass, const nn::Tensor& grad_missing,
                const nn::Tensor& grad_refined);

  /// Single-cloud convenience wrapper around forward().
  CompletionResult complete(const PointCloud& partial, Seed seed);

  std::vector<nn::Parameter*> parameters();
  std::vector<nn::Buffer> buffers();
  void zero_grad();
  void set_training(bool training);
  bool training() const noexcept { return training_; }

  const ModelConfig& config() const noexcept { return config_; }
  double mu() const noexcept { return config_.mu; }
  void set_mu(double mu);

  MpnEncoder& encoder() noexcept { return *encoder_; }
  Decoder& decoder() noexcept { return *decoder_; }
  PointRefiner& refiner() noexcept { return *refiner_; }

 private:
  ModelConfig config_;
  bool training_ = true;
  std::unique_ptr<MpnEncoder> encoder_;
  std::unique_ptr<Decoder> decoder_;
  std::unique_ptr<PointRefiner> refiner_;
};

}  // namespace pcc
