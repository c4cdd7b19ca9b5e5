#pragma once

#include "pcc/geometry/shape_sample.hpp"
#include "pcc/models/completion_model.hpp"
#include "pcc/models/joint_loss.hpp"
#include "pcc/nn/adam.hpp"
#include "pcc/training/dataset.hpp"
#include "pcc/training/train_config.hpp"

#include <memory>

namespace pcc {

struct EpochStats {
  std::size_t epoch = 0;
  double loss_total = 0.0;
  double loss_missing = 0.0;
  double loss_refined = 0.0;
  double seconds = 0.0;
  std::size_t batches = 0;
  bool emd_converged = true;
};

nn::AdamOptions adam_options_for(const TrainConfig& config);
LossOptions loss_options_for(const TrainConfig& config);
SampleSizes sample_sizes_for(const ModelConfig& config);

/// One pass over the training split: a fresh sphere split per shape (seeded by
/// (seed, epoch, shape)), shuffled batches, and one ADAM step per batch. The last partial batch
/// is kept. Means are weighted by batch size.
EpochStats run_epoch(CompletionModel& model, const Dataset& dataset, const TrainConfig& config,
                     std::size_t epoch_index);

/// Model plus training progress; the unit that checkpoints save and restore.
class Trainer {
 public:
  Trainer(const TrainConfig& config, Seed init_seed);
  Trainer(const TrainConfig& config, std::unique_ptr<CompletionModel> model,
          std::size_t epochs_completed);

  EpochStats run_epoch(const Dataset& dataset);

  CompletionModel& model() noexcept { return *model_; }
  const TrainConfig& config() const noexcept { return config_; }
  TrainConfig& mutable_config() noexcept { return config_; }
  std::size_t epochs_completed() const noexcept { return epochs_completed_; }

 private:
  TrainConfig config_;
  std::unique_ptr<CompletionModel> model_;
  std::size_t epochs_completed_ = 0;
};

/// Seed used for weight initialization of a fresh run.
Seed init_seed_for(const TrainConfig& config);

}  // namespace pcc
