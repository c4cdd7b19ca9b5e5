#include "pcc/training/train_config.hpp"

#include "../common/parse_util.hpp"
#include "pcc/error.hpp"

#include <fmt/format.h>

#include <fstream>

namespace pcc {

using detail::parse_real;
using detail::parse_size;
using detail::trim;

namespace {

std::string real_text(double v) { return fmt::format("{:.17g}", v); }

}  // namespace

std::vector<std::string> TrainConfig::validate() const {
  std::vector<std::string> errors;
  if (!(lr > 0.0)) errors.push_back("lr must be positive");
  if (epochs < 1) errors.push_back("epochs must be >= 1");
  if (batch_size < 1) errors.push_back("batch_size must be >= 1");
  if (checkpoint_every < 1) errors.push_back("checkpoint_every must be >= 1");
  if (!(radius > 0.0 && radius < 1.0)) errors.push_back("radius must lie in (0, 1)");
  if (!(mu >= 0.0)) errors.push_back("mu must be non-negative");
  if (!(density_sigma > 0.0)) errors.push_back("density_sigma must be positive");
  if (!(grad_clip >= 0.0)) errors.push_back("grad_clip must be >= 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0)) errors.push_back("adam_beta1 must lie in [0, 1)");
  if (!(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) errors.push_back("adam_beta2 must lie in [0, 1)");
  if (!(adam_eps > 0.0)) errors.push_back("adam_eps must be positive");
  if (!(emd_eps >= 0.0)) errors.push_back("emd_eps must be >= 0");
  if (model != "full" && model != "toy") errors.push_back("model must be 'full' or 'toy'");
  return errors;
}

void TrainConfig::set(const std::string& key, const std::string& raw) {
  const std::string value(trim(raw));
  if (key == "lr") lr = parse_real(value, key);
  else if (key == "epochs") epochs = parse_size(value, key);
  else if (key == "batch_size") batch_size = parse_size(value, key);
  else if (key == "radius") radius = parse_real(value, key);
  else if (key == "decoder") decoder = parse_decoder_kind(value);
  else if (key == "mu") mu = parse_real(value, key);
  else if (key == "seed") seed = detail::parse_number<Seed>(value, key);
  else if (key == "sampling_method") sampling_method = parse_sampling_method(value);
  else if (key == "density_sigma") density_sigma = parse_real(value, key);
  else if (key == "checkpoint_every") checkpoint_every = parse_size(value, key);
  else if (key == "grad_clip") grad_clip = parse_real(value, key);
  else if (key == "adam_beta1") adam_beta1 = parse_real(value, key);
  else if (key == "adam_beta2") adam_beta2 = parse_real(value, key);
  else if (key == "adam_eps") adam_eps = parse_real(value, key);
  else if (key == "emd_eps") emd_eps = parse_real(value, key);
  else if (key == "model") model = value;
  else if (key == "dataset") dataset = value;
  else if (key == "out_dir") out_dir = value;
  else throw InvalidArgument("unknown config key '" + key + "'");
}

std::map<std::string, std::string> TrainConfig::to_key_values() const {
  return {
      {"lr", real_text(lr)},
      {"epochs", std::to_string(epochs)},
      {"batch_size", std::to_string(batch_size)},
      {"radius", real_text(radius)},
      {"decoder", std::string(to_string(decoder))},
      {"mu", real_text(mu)},
      {"seed", std::to_string(seed)},
      {"sampling_method", std::string(to_string(sampling_method))},
      {"density_sigma", real_text(density_sigma)},
      {"checkpoint_every", std::to_string(checkpoint_every)},
      {"grad_clip", real_text(grad_clip)},
      {"adam_beta1", real_text(adam_beta1)},
      {"adam_beta2", real_text(adam_beta2)},
      {"adam_eps", real_text(adam_eps)},
      {"emd_eps", real_text(emd_eps)},
      {"model", model},
      {"dataset", dataset},
      {"out_dir", out_dir},
  };
}

std::vector<std::string> TrainConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : TrainConfig{}.to_key_values()) out.push_back(k);
  return out;
}

TrainConfig TrainConfig::from_key_values(const std::map<std::string, std::string>& kv,
                                         std::vector<std::string>* errors) {
  TrainConfig c;
  for (const auto& [key, value] : kv) {
    try {
      c.set(key, value);
    } catch (const InvalidArgument& e) {
      if (!errors) throw;
      errors->push_back(e.what());
    }
  }
  return c;
}

ModelConfig model_config_for(const TrainConfig& config) {
  ModelConfig m = config.model == "toy" ? ModelConfig::toy() : ModelConfig{};
  m.decoder = config.decoder;
  m.mu = config.mu;
  m.sampling = config.sampling_method;
  m.density_sigma = config.density_sigma;
  return m;
}

std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const auto key = trim(view.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", line_no);
    kv[std::string(key)] = std::string(trim(view.substr(eq + 1)));
  }
  return kv;
}

void write_key_value_file(const std::filesystem::path& path,
                          const std::map<std::string, std::string>& kv) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

}  // namespace pcc
