#pragma once

#include "pcc/error.hpp"
#include "pcc/models/completion_model.hpp"
#include "pcc/training/train_config.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pcc {

// Layout (little-endian):
//   8 bytes   magic "PCCCKPT\0"
//   u32       format version
//   u32 + ..  metadata text, "key=value" lines: model.* architecture, train.* config,
//             epochs_completed
//   u32       entry count
//   entries   u32 name length, name, u8 dtype, u8 rank, u64 dims[rank]
//   payloads  raw values in manifest order
// Entries cover every parameter (value, ADAM moments, step counter) and every batch-norm
// running statistic.

inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public Error {
 public:
  using Error::Error;
};

void save_checkpoint(const std::filesystem::path& path, CompletionModel& model,
                     const TrainConfig& config, std::size_t epochs_completed);

struct LoadedCheckpoint {
  std::unique_ptr<CompletionModel> model;
  TrainConfig train_config;
  std::size_t epochs_completed = 0;
  std::vector<std::string> warnings;
};

/// The stored architecture always wins; a conflicting `requested_decoder` only adds a warning.
LoadedCheckpoint load_checkpoint(const std::filesystem::path& path,
                                 std::optional<DecoderKind> requested_decoder = std::nullopt);

}  // namespace pcc
