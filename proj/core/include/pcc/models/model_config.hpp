#pragma once

#include "pcc/geometry/sampling.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pcc {

enum class DecoderKind { kMlp, kMorphing };

DecoderKind parse_decoder_kind(std::string_view name);
std::string_view to_string(DecoderKind kind);

/// Architecture and merge hyperparameters. Defaults reproduce the full-size networks.
struct ModelConfig {
  DecoderKind decoder = DecoderKind::kMorphing;
  std::size_t missing_points = 1024;  // M
  std::size_t morph_networks = 16;    // K
  std::size_t output_points = 2048;   // merged sample and refined output size
  std::vector<std::size_t> encoder_widths{64, 128, 1024};
  std::size_t feature_dim = 1024;
  std::vector<std::size_t> mlp_hidden{1024, 1024};
  std::vector<std::size_t> morph_hidden{512, 256, 128};
  std::vector<std::size_t> refiner_widths{64, 128, 1024};
  std::vector<std::size_t> refiner_head{512, 256, 128};
  double mu = 1.0;
  SamplingMethod sampling = SamplingMethod::kFarthestPoint;
  double density_sigma = kDefaultDensitySigma;

  /// Throws InvalidArgument listing every violated constraint.
  void validate() const;

  std::size_t refiner_concat_width() const { return refiner_widths.at(0) + refiner_widths.at(2); }

  /// Tiny widths for finite-difference checks and fast tests.
  static ModelConfig toy();

  std::map<std::string, std::string> to_key_values() const;
  static ModelConfig from_key_values(const std::map<std::string, std::string>& kv);
};

std::string format_size_list(const std::vector<std::size_t>& v);
std::vector<std::size_t> parse_size_list(std::string_view text);

}  // namespace pcc
