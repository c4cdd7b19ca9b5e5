#pragma once

#include "pcc/cli/report.hpp"
#include "pcc/error.hpp"
#include "pcc/training/checkpoint.hpp"
#include "pcc/training/dataset.hpp"
#include "pcc/training/evaluation.hpp"
#include "pcc/training/train_config.hpp"
#include "pcc/training/trainer.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcc::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitRuntime = 2, kExitGradcheck = 3 };

/// Invalid flags or configuration values.
class UsageError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kCheckpointFile = "checkpoint.pcc";
inline constexpr const char* kTrainLogFile = "train_log.csv";
inline constexpr const char* kConfigCopyFile = "config.txt";

/// "train", "test" or "all".
std::vector<std::size_t> select_split(const Dataset& dataset, const std::string& split);

/// Radii lo, lo + step, ..., hi (inclusive), rounded to 12 decimals.
std::vector<double> radius_sweep(double lo, double hi, double step);

struct PrepareOptions {
  std::filesystem::path data_dir;  // contains manifest.csv
  std::filesystem::path out_dir;
  std::size_t n_points = kShapePoints;
  Seed seed = 0;
};

struct PrepareResult {
  std::size_t written = 0;
  std::vector<std::string> skipped;
  std::vector<std::pair<std::string, std::size_t>> category_counts;
};

/// Normalizes and samples every manifest mesh into `clouds/`, writes a cloud manifest and
/// `summary.csv`. Unreadable meshes are skipped with a warning.
PrepareResult cmd_prepare(const PrepareOptions& options);

struct TrainOptions {
  TrainConfig config;
  bool resume = false;
  std::size_t stop_after = 0;  // epochs to run in this invocation, 0 = until config.epochs
};

struct TrainResult {
  std::vector<EpochStats> epochs;  // this invocation only
  std::size_t epochs_completed = 0;
};

/// Writes checkpoint.pcc, train_log.csv and config.txt into config.out_dir. With `resume` the
/// stored configuration is used (only `epochs` is taken from the given one) and log rows past
/// the checkpoint are dropped.
TrainResult cmd_train(const TrainOptions& options);

struct EvalOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path dataset;
  double radius = 0.35;
  Seed seed = kDefaultEvalSeed;
  std::string split = "test";
  std::filesystem::path out;  // CSV; skipped when empty
};

std::vector<CategoryMetrics> cmd_eval(const EvalOptions& options);

struct RobustnessOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path dataset;
  std::vector<double> radii = radius_sweep(0.25, 0.55, 0.05);
  Seed seed = kDefaultEvalSeed;
  std::string split = "test";
  std::filesystem::path csv;
  std::filesystem::path svg;
};

std::vector<RobustnessRow> cmd_robustness(const RobustnessOptions& options);

using AblateOptions = EvalOptions;

/// Refined output against the merged cloud of a second pass with mu forced to 0.
std::vector<AblationRow> cmd_ablate(const AblateOptions& options);

struct CompleteOptions {
  std::filesystem::path checkpoint;
  std::filesystem::path input;
  std::filesystem::path out_dir;
  Seed seed = 0;
  std::string extension = ".xyz";
};

struct CompleteOutputs {
  std::filesystem::path missing_pred;
  std::filesystem::path merged;
  std::filesystem::path refined;
};

CompleteOutputs cmd_complete(const CompleteOptions& options);

struct ToydataOptions {
  std::size_t shapes = 4;
  Seed seed = 0;
  std::size_t n_points = kShapePoints;
  std::filesystem::path out_dir;
};

void cmd_toydata(const ToydataOptions& options);

}  // namespace pcc::cli
