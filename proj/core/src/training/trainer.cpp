#include "pcc/training/trainer.hpp"

#include "pcc/error.hpp"
#include "pcc/geometry/shape_sample.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace pcc {

nn::AdamOptions adam_options_for(const TrainConfig& config) {
  return {config.lr, config.adam_beta1, config.adam_beta2, config.adam_eps};
}

LossOptions loss_options_for(const TrainConfig& config) {
  LossOptions o;
  o.auction.eps_final = config.emd_eps;
  return o;
}

SampleSizes sample_sizes_for(const ModelConfig& config) {
  return {config.output_points, config.output_points, config.missing_points};
}

Seed init_seed_for(const TrainConfig& config) { return derive_seed(config.seed, {}); }

EpochStats run_epoch(CompletionModel& model, const Dataset& dataset, const TrainConfig& config,
                     std::size_t epoch_index) {
  const auto start = std::chrono::steady_clock::now();
  const auto train = dataset.indices(Split::kTrain);
  if (train.empty()) throw InvalidArgument("dataset has no training shapes");
  if (config.batch_size < 1) throw InvalidArgument("batch_size must be >= 1");

  model.set_training(true);
  const SampleSizes sizes = sample_sizes_for(model.config());
  std::vector<ShapeSample> samples;
  samples.reserve(train.size());
  for (std::size_t s : train) {
    samples.push_back(make_sample(dataset.shapes[s].cloud, config.radius,
                                  derive_seed(config.seed, {epoch_index, s}), sizes));
  }

  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng = make_rng(derive_seed(config.seed, {epoch_index}));
  std::shuffle(order.begin(), order.end(), shuffle_rng);

  const nn::Adam adam(adam_options_for(config));
  const LossOptions loss_options = loss_options_for(config);
  EpochStats stats;
  stats.epoch = epoch_index + 1;
  for (std::size_t begin = 0, batch = 0; begin < order.size(); begin += config.batch_size, ++batch) {
    const std::size_t end = std::min(order.size(), begin + config.batch_size);
    std::vector<PointCloud> partial, missing, complete;
    for (std::size_t i = begin; i < end; ++i) {
      const ShapeSample& s = samples[order[i]];
      partial.push_back(s.partial);
      missing.push_back(s.missing);
      complete.push_back(s.complete);
    }
    const auto pass =
        model.forward(tensor_from_clouds(partial), derive_seed(config.seed, {epoch_index, batch, 1}));
    const BatchLoss loss =
        batch_joint_loss(pass.missing_pred, missing, pass.refined, complete, loss_options);
    if (!std::isfinite(loss.loss.total)) {
      throw Error("non-finite loss in epoch " + std::to_string(epoch_index + 1));
    }
    model.zero_grad();
    model.backward(pass, loss.grad_missing, loss.grad_refined);
    const auto params = model.parameters();
    if (config.grad_clip > 0.0) nn::clip_grad_norm(params, config.grad_clip);
    adam.step(params);
    model.zero_grad();

    const double weight = static_cast<double>(end - begin);
    stats.loss_total += weight * loss.loss.total;
    stats.loss_missing += weight * loss.loss.missing;
    stats.loss_refined += weight * loss.loss.refined;
    stats.emd_converged = stats.emd_converged && loss.converged;
    ++stats.batches;
  }
  const double n = static_cast<double>(order.size());
  stats.loss_total /= n;
  stats.loss_missing /= n;
  stats.loss_refined /= n;
  stats.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return stats;
}

Trainer::Trainer(const TrainConfig& config, Seed init_seed)
    : config_(config),
      model_(std::make_unique<CompletionModel>(model_config_for(config), init_seed)) {}

Trainer::Trainer(const TrainConfig& config, std::unique_ptr<CompletionModel> model,
                 std::size_t epochs_completed)
    : config_(config), model_(std::move(model)), epochs_completed_(epochs_completed) {
  if (!model_) throw InvalidArgument("trainer needs a model");
}

EpochStats Trainer::run_epoch(const Dataset& dataset) {
  EpochStats stats = pcc::run_epoch(*model_, dataset, config_, epochs_completed_);
  ++epochs_completed_;
  return stats;
}

}  // namespace pcc
