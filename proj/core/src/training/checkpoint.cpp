#include "pcc/training/checkpoint.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace pcc {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

constexpr char kMagic[8] = {'P', 'C', 'C', 'C', 'K', 'P', 'T', '\0'};
constexpr std::size_t kMaxNameLength = 4096;
constexpr std::size_t kMaxRank = 8;

enum class DType : std::uint8_t { kF64 = 1, kF32 = 2, kI64 = 3 };

constexpr DType kRealDType = sizeof(nn::Real) == 8 ? DType::kF64 : DType::kF32;

std::size_t dtype_size(DType t) { return t == DType::kF32 ? 4 : 8; }

struct Entry {
  std::string name;
  DType dtype;
  nn::Shape shape;
  void* data;  // destination (load) or source (save)
};

std::vector<Entry> model_entries(CompletionModel& model, std::vector<std::int64_t>& steps) {
  std::vector<Entry> entries;
  auto params = model.parameters();
  steps.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    nn::Parameter& p = *params[i];
    entries.push_back({p.name, kRealDType, p.value.shape(), p.value.data()});
    entries.push_back({p.name + ".adam_m", kRealDType, p.adam_m.shape(), p.adam_m.data()});
    entries.push_back({p.name + ".adam_v", kRealDType, p.adam_v.shape(), p.adam_v.data()});
    steps[i] = p.adam_step;
    entries.push_back({p.name + ".adam_step", DType::kI64, {}, &steps[i]});
  }
  for (const nn::Buffer& b : model.buffers()) {
    entries.push_back({b.name, kRealDType, b.tensor->shape(), b.tensor->data()});
  }
  return entries;
}

std::size_t volume(const nn::Shape& s) {
  std::size_t v = 1;
  for (auto d : s) v *= d;
  return v;
}

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw CheckpointError("truncated checkpoint");
  return v;
}

std::string get_string(std::istream& in, std::size_t limit) {
  const auto len = get<std::uint32_t>(in);
  if (len > limit) throw CheckpointError("corrupt manifest: string length out of range");
  std::string s(len, '\0');
  if (!in.read(s.data(), len)) throw CheckpointError("truncated checkpoint");
  return s;
}

std::map<std::string, std::string> parse_metadata(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CheckpointError("corrupt metadata line '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, CompletionModel& model,
                     const TrainConfig& config, std::size_t epochs_completed) {
  std::string meta;
  for (const auto& [k, v] : model.config().to_key_values()) meta += "model." + k + "=" + v + "\n";
  for (const auto& [k, v] : config.to_key_values()) meta += "train." + k + "=" + v + "\n";
  meta += fmt::format("epochs_completed={}\n", epochs_completed);

  std::vector<std::int64_t> steps;
  const auto entries = model_entries(model, steps);

  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write checkpoint " + tmp.string());
    out.write(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kCheckpointVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
    out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(entries.size()));
    for (const Entry& e : entries) {
      put<std::uint32_t>(out, static_cast<std::uint32_t>(e.name.size()));
      out.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
      put<std::uint8_t>(out, static_cast<std::uint8_t>(e.dtype));
      put<std::uint8_t>(out, static_cast<std::uint8_t>(e.shape.size()));
      for (auto d : e.shape) put<std::uint64_t>(out, d);
    }
    for (const Entry& e : entries) {
      out.write(static_cast<const char*>(e.data),
                static_cast<std::streamsize>(volume(e.shape) * dtype_size(e.dtype)));
    }
    if (!out) throw Error("failed writing checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 std::optional<DecoderKind> requested_decoder) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError(path.string() + " is not a checkpoint");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw CheckpointError(fmt::format("checkpoint version {} unsupported (expected {})", version,
                                      kCheckpointVersion));
  }
  const auto meta = parse_metadata(get_string(in, 1u << 20));

  std::map<std::string, std::string> model_kv, train_kv;
  std::size_t epochs_completed = 0;
  for (const auto& [k, v] : meta) {
    if (k.rfind("model.", 0) == 0) model_kv[k.substr(6)] = v;
    else if (k.rfind("train.", 0) == 0) train_kv[k.substr(6)] = v;
    else if (k == "epochs_completed") epochs_completed = std::stoull(v);
  }
  if (model_kv.empty()) throw CheckpointError("corrupt manifest: missing model description");

  LoadedCheckpoint result;
  ModelConfig model_config;
  try {
    model_config = ModelConfig::from_key_values(model_kv);
    model_config.validate();
    result.train_config = TrainConfig::from_key_values(train_kv);
  } catch (const InvalidArgument& e) {
    throw CheckpointError(std::string("corrupt manifest: ") + e.what());
  }
  result.train_config.decoder = model_config.decoder;
  result.epochs_completed = epochs_completed;
  if (requested_decoder && *requested_decoder != model_config.decoder) {
    result.warnings.push_back(fmt::format(
        "requested decoder '{}' ignored; checkpoint was trained with '{}'",
        to_string(*requested_decoder), to_string(model_config.decoder)));
    spdlog::warn("{}", result.warnings.back());
  }
  result.model = std::make_unique<CompletionModel>(model_config, 0);

  std::vector<std::int64_t> steps;
  const auto expected = model_entries(*result.model, steps);
  const auto count = get<std::uint32_t>(in);
  if (count != expected.size()) {
    throw CheckpointError(fmt::format("corrupt manifest: {} entries, model needs {}", count,
                                      expected.size()));
  }
  for (const Entry& e : expected) {
    const std::string name = get_string(in, kMaxNameLength);
    const auto dtype = static_cast<DType>(get<std::uint8_t>(in));
    const auto rank = get<std::uint8_t>(in);
    if (rank > kMaxRank) throw CheckpointError("corrupt manifest: rank out of range");
    nn::Shape shape(rank);
    for (auto& d : shape) d = get<std::uint64_t>(in);
    if (name != e.name || dtype != e.dtype || shape != e.shape) {
      throw CheckpointError(fmt::format("corrupt manifest: entry '{}' {} does not match '{}' {}",
                                        name, nn::shape_string(shape), e.name,
                                        nn::shape_string(e.shape)));
    }
  }
  for (const Entry& e : expected) {
    const auto bytes = static_cast<std::streamsize>(volume(e.shape) * dtype_size(e.dtype));
    if (!in.read(static_cast<char*>(e.data), bytes)) throw CheckpointError("truncated checkpoint");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw CheckpointError("corrupt checkpoint: trailing bytes");
  }
  auto params = result.model->parameters();
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->adam_step = steps[i];
  return result;
}

}  // namespace pcc
