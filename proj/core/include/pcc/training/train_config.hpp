#pragma once

#include "pcc/geometry/sampling.hpp"
#include "pcc/models/model_config.hpp"
#include "pcc/random.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pcc {

/// Training hyperparameters. Every field is a flat config key of the same name.
struct TrainConfig {
  double lr = 0.001;
  std::size_t epochs = 200;
  std::size_t batch_size = 64;
  double radius = 0.35;
  DecoderKind decoder = DecoderKind::kMorphing;
  double mu = 1.0;
  Seed seed = 0;
  SamplingMethod sampling_method = SamplingMethod::kFarthestPoint;
  double density_sigma = kDefaultDensitySigma;
  std::size_t checkpoint_every = 10;
  /// Global gradient-norm clip threshold; 0 disables clipping.
  double grad_clip = 0.0;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  /// Final auction epsilon for the EMD loss; 0 selects 1e-4 / n.
  double emd_eps = 0.0;
  /// Architecture preset: "full" or "toy".
  std::string model = "full";
  std::string dataset;
  std::string out_dir;

  /// Every violated constraint, empty when valid.
  std::vector<std::string> validate() const;

  /// Sets one key; throws InvalidArgument for unknown keys or unparsable values.
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_key_values() const;

  /// Applies every pair. With `errors`, bad pairs are recorded there and skipped; without,
  /// the first bad pair throws.
  static TrainConfig from_key_values(const std::map<std::string, std::string>& kv,
                                     std::vector<std::string>* errors = nullptr);
  static std::vector<std::string> keys();
};

/// Architecture implied by the config (preset + decoder, mu, sampling).
ModelConfig model_config_for(const TrainConfig& config);

/// Flat "key = value" text; '#' starts a comment. Throws ParseError on malformed lines.
std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path);
void write_key_value_file(const std::filesystem::path& path,
                          const std::map<std::string, std::string>& kv);

}  // namespace pcc
