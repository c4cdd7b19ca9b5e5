#include "pcc/models/model_config.hpp"

#include "pcc/error.hpp"
#include "../common/parse_util.hpp"

#include <fmt/format.h>

namespace pcc {

using detail::parse_real;
using detail::parse_size;

DecoderKind parse_decoder_kind(std::string_view name) {
  if (name == "mlp") return DecoderKind::kMlp;
  if (name == "mbd") return DecoderKind::kMorphing;
  throw InvalidArgument("unknown decoder '" + std::string(name) + "' (expected mlp|mbd)");
}

std::string_view to_string(DecoderKind kind) { return kind == DecoderKind::kMlp ? "mlp" : "mbd"; }

std::string format_size_list(const std::vector<std::size_t>& v) {
  return fmt::format("{}", fmt::join(v, ","));
}

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    out.push_back(parse_size(text.substr(start, end - start), "list"));
    start = end + 1;
  }
  return out;
}

void ModelConfig::validate() const {
  std::vector<std::string> errors;
  auto positive = [&](const std::vector<std::size_t>& v, const char* name) {
    if (v.size() != 3) errors.push_back(fmt::format("{} needs 3 widths", name));
    for (auto w : v) {
      if (w == 0) errors.push_back(fmt::format("{} has a zero width", name));
    }
  };
  positive(encoder_widths, "encoder_widths");
  positive(morph_hidden, "morph_hidden");
  positive(refiner_widths, "refiner_widths");
  positive(refiner_head, "refiner_head");
  if (mlp_hidden.size() != 2) errors.push_back("mlp_hidden needs 2 widths");
  if (feature_dim == 0) errors.push_back("feature_dim must be positive");
  if (missing_points == 0) errors.push_back("missing_points must be positive");
  if (output_points == 0) errors.push_back("output_points must be positive");
  if (decoder == DecoderKind::kMorphing &&
      (morph_networks == 0 || missing_points % morph_networks != 0)) {
    errors.push_back(fmt::format("missing_points ({}) must be divisible by morph_networks ({})",
                                 missing_points, morph_networks));
  }
  if (!(mu >= 0.0)) errors.push_back("mu must be non-negative");
  if (!(density_sigma > 0.0)) errors.push_back("density_sigma must be positive");
  if (!errors.empty()) {
    throw InvalidArgument(fmt::format("invalid model config: {}", fmt::join(errors, "; ")));
  }
}

ModelConfig ModelConfig::toy() {
  ModelConfig c;
  c.missing_points = 8;
  c.morph_networks = 2;
  c.output_points = 16;
  c.encoder_widths = {4, 6, 8};
  c.feature_dim = 8;
  c.mlp_hidden = {8, 8};
  c.morph_hidden = {6, 5, 4};
  c.refiner_widths = {4, 6, 8};
  c.refiner_head = {6, 5, 4};
  return c;
}

std::map<std::string, std::string> ModelConfig::to_key_values() const {
  return {
      {"decoder", std::string(to_string(decoder))},
      {"missing_points", std::to_string(missing_points)},
      {"morph_networks", std::to_string(morph_networks)},
      {"output_points", std::to_string(output_points)},
      {"encoder_widths", format_size_list(encoder_widths)},
      {"feature_dim", std::to_string(feature_dim)},
      {"mlp_hidden", format_size_list(mlp_hidden)},
      {"morph_hidden", format_size_list(morph_hidden)},
      {"refiner_widths", format_size_list(refiner_widths)},
      {"refiner_head", format_size_list(refiner_head)},
      {"mu", fmt::format("{:.17g}", mu)},
      {"sampling", std::string(to_string(sampling))},
      {"density_sigma", fmt::format("{:.17g}", density_sigma)},
  };
}

ModelConfig ModelConfig::from_key_values(const std::map<std::string, std::string>& kv) {
  ModelConfig c;
  for (const auto& [key, value] : kv) {
    if (key == "decoder") c.decoder = parse_decoder_kind(value);
    else if (key == "missing_points") c.missing_points = parse_size(value, key);
    else if (key == "morph_networks") c.morph_networks = parse_size(value, key);
    else if (key == "output_points") c.output_points = parse_size(value, key);
    else if (key == "encoder_widths") c.encoder_widths = parse_size_list(value);
    else if (key == "feature_dim") c.feature_dim = parse_size(value, key);
    else if (key == "mlp_hidden") c.mlp_hidden = parse_size_list(value);
    else if (key == "morph_hidden") c.morph_hidden = parse_size_list(value);
    else if (key == "refiner_widths") c.refiner_widths = parse_size_list(value);
    else if (key == "refiner_head") c.refiner_head = parse_size_list(value);
    else if (key == "mu") c.mu = parse_real(value, key);
    else if (key == "sampling") c.sampling = parse_sampling_method(value);
    else if (key == "density_sigma") c.density_sigma = parse_real(value, key);
  }
  return c;
}

}  // namespace pcc
