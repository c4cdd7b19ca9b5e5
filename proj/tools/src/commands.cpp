#include "pcc/cli/commands.hpp"

#include "pcc/geometry/cloud_io.hpp"
#include "pcc/geometry/sampling.hpp"
#include "pcc/training/toy_shapes.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;

namespace pcc::cli {
namespace {

struct EvalContext {
  LoadedCheckpoint checkpoint;
  Dataset dataset;
  std::vector<std::size_t> indices;
  SampleSizes sizes;
};

void check_radius(double radius) {
  if (!(radius > 0.0 && radius < 1.0)) {
    throw UsageError(fmt::format("radius {} must lie in (0, 1)", radius));
  }
}

EvalContext open_eval(const fs::path& checkpoint, const fs::path& dataset, const std::string& split) {
  EvalContext ctx{load_checkpoint(checkpoint), {}, {}, {}};
  for (const auto& w : ctx.checkpoint.warnings) spdlog::warn("{}", w);
  ctx.dataset = load_dataset(dataset, kShapePoints, ctx.checkpoint.train_config.seed);
  ctx.indices = select_split(ctx.dataset, split);
  if (ctx.indices.empty()) throw Error(fmt::format("no shapes in split '{}'", split));
  ctx.sizes = sample_sizes_for(ctx.checkpoint.model->config());
  return ctx;
}

std::vector<ShapeEvaluation> evaluate(EvalContext& ctx, double radius, Seed seed) {
  return evaluate_shapes(ctx.dataset, ctx.indices, radius, seed, ctx.sizes,
                         model_completer(*ctx.checkpoint.model));
}

std::string log_row(const EpochStats& s) {
  return fmt::format("{},{:.9g},{:.9g},{:.9g},{:.3f}\n", s.epoch, s.loss_total, s.loss_missing,
                     s.loss_refined, s.seconds);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Keeps the header and every row up to `epochs`.
std::string truncate_log(const std::string& text, std::size_t epochs) {
  std::istringstream in(text);
  std::string line, out;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      out += line + "\n";
      header = false;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    if (std::stoull(line.substr(0, comma)) <= epochs) out += line + "\n";
  }
  return out;
}

void warn_config_drift(const TrainConfig& stored, const TrainConfig& given) {
  const auto a = stored.to_key_values();
  const auto b = given.to_key_values();
  for (const auto& [key, value] : a) {
    if (key == "epochs" || key == "out_dir" || key == "dataset") continue;
    const auto it = b.find(key);
    if (it != b.end() && it->second != value) {
      spdlog::warn("resume keeps stored {}={} (ignoring {})", key, value, it->second);
    }
  }
}

}  // namespace

std::vector<std::size_t> select_split(const Dataset& dataset, const std::string& split) {
  if (split == "all") return dataset.all_indices();
  try {
    return dataset.indices(parse_split(split));
  } catch (const Error&) {
    throw UsageError(fmt::format("unknown split '{}' (expected train, test or all)", split));
  }
}

std::vector<double> radius_sweep(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) throw UsageError("radius sweep needs step > 0 and hi >= lo");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> radii;
  for (std::size_t i = 0; i < count; ++i) {
    radii.push_back(std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12);
  }
  return radii;
}

PrepareResult cmd_prepare(const PrepareOptions& options) {
  const fs::path manifest = fs::is_directory(options.data_dir)
                                ? options.data_dir / "manifest.csv"
                                : options.data_dir;
  if (!fs::exists(manifest)) throw Error("missing manifest " + manifest.string());
  const auto rows = read_manifest(manifest);
  Dataset ds;
  PrepareResult result;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const fs::path path = manifest.parent_path() / rows[i].path;
    ShapeEntry entry;
    entry.id = path.stem().string();
    entry.category = rows[i].category;
    entry.split = rows[i].split;
    try {
      entry.cloud = sample_mesh_file(path, options.n_points, derive_seed(options.seed, {i}));
    } catch (const std::exception& e) {
      spdlog::warn("skipping {}: {}", path.string(), e.what());
      result.skipped.push_back(rows[i].path);
      continue;
    }
    ds.shapes.push_back(std::move(entry));
  }
  if (ds.shapes.empty()) throw Error("no readable shapes in " + manifest.string());
  save_dataset(ds, options.out_dir);

  std::map<std::string, std::size_t> counts;
  for (const auto& s : ds.shapes) ++counts[s.category];
  std::string summary = "category,count\n";
  for (const auto& [category, n] : counts) {
    summary += fmt::format("{},{}\n", category, n);
    result.category_counts.emplace_back(category, n);
  }
  write_text_file(options.out_dir / "summary.csv", summary);
  result.written = ds.shapes.size();
  return result;
}

TrainResult cmd_train(const TrainOptions& options) {
  TrainConfig config = options.config;
  if (const auto errors = config.validate(); !errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw UsageError(msg);
  }
  const fs::path out_dir = config.out_dir;
  const fs::path ckpt_path = out_dir / kCheckpointFile;
  const fs::path log_path = out_dir / kTrainLogFile;
  fs::create_directories(out_dir);

  std::unique_ptr<Trainer> trainer;
  std::string log_text;
  if (options.resume) {
    LoadedCheckpoint loaded = load_checkpoint(ckpt_path);
    for (const auto& w : loaded.warnings) spdlog::warn("{}", w);
    warn_config_drift(loaded.train_config, config);
    TrainConfig resumed = loaded.train_config;
    resumed.epochs = config.epochs;
    resumed.out_dir = config.out_dir;
    resumed.dataset = config.dataset;
    config = resumed;
    trainer = std::make_unique<Trainer>(config, std::move(loaded.model), loaded.epochs_completed);
    log_text = truncate_log(read_file(log_path), loaded.epochs_completed);
    spdlog::info("resuming after epoch {}", loaded.epochs_completed);
  } else {
    trainer = std::make_unique<Trainer>(config, init_seed_for(config));
  }
  if (log_text.empty()) log_text = "epoch,loss_total,loss_missing,loss_refined,seconds\n";
  write_text_file(log_path, log_text);
  write_key_value_file(out_dir / kConfigCopyFile, config.to_key_values());

  const Dataset dataset = load_dataset(config.dataset, kShapePoints, config.seed);
  if (dataset.indices(Split::kTrain).empty()) throw Error("dataset has no training shapes");

  std::ofstream log(log_path, std::ios::app);
  TrainResult result;
  while (trainer->epochs_completed() < config.epochs &&
         (options.stop_after == 0 || result.epochs.size() < options.stop_after)) {
    const EpochStats stats = trainer->run_epoch(dataset);
    result.epochs.push_back(stats);
    log << log_row(stats) << std::flush;
    spdlog::info("epoch {} loss {:.6f} (missing {:.6f}, refined {:.6f}) {:.1f}s", stats.epoch,
                 stats.loss_total, stats.loss_missing, stats.loss_refined, stats.seconds);
    if (!stats.emd_converged) spdlog::warn("EMD auction hit its iteration cap in epoch {}", stats.epoch);
    const std::size_t done = trainer->epochs_completed();
    const bool last = done == config.epochs ||
                      (options.stop_after != 0 && result.epochs.size() == options.stop_after);
    if (last || (config.checkpoint_every > 0 && done % config.checkpoint_every == 0)) {
      save_checkpoint(ckpt_path, trainer->model(), config, done);
    }
  }
  if (result.epochs.empty() && !options.resume) {
    save_checkpoint(ckpt_path, trainer->model(), config, trainer->epochs_completed());
  }
  result.epochs_completed = trainer->epochs_completed();
  return result;
}

std::vector<CategoryMetrics> cmd_eval(const EvalOptions& options) {
  check_radius(options.radius);
  EvalContext ctx = open_eval(options.checkpoint, options.dataset, options.split);
  auto rows = aggregate_by_category(evaluate(ctx, options.radius, options.seed), true);
  if (!options.out.empty()) write_text_file(options.out, format_metrics_csv(rows));
  return rows;
}

std::vector<RobustnessRow> cmd_robustness(const RobustnessOptions& options) {
  if (options.radii.empty()) throw UsageError("no radii given");
  for (std::size_t i = 0; i < options.radii.size(); ++i) {
    check_radius(options.radii[i]);
    if (i > 0 && !(options.radii[i] > options.radii[i - 1])) {
      throw UsageError("radii must be strictly increasing");
    }
  }
  EvalContext ctx = open_eval(options.checkpoint, options.dataset, options.split);
  std::vector<RobustnessRow> rows;
  for (double r : options.radii) {
    const auto overall = aggregate_by_category(evaluate(ctx, r, options.seed), true).back();
    rows.push_back({r, scaled_for_report(overall.errors).chamfer});
    spdlog::info("radius {} mean chamfer {:.6f}", r, rows.back().mean_chamfer);
  }
  if (!options.csv.empty()) write_text_file(options.csv, format_robustness_csv(rows));
  if (!options.svg.empty()) write_text_file(options.svg, format_robustness_svg(rows));
  return rows;
}

std::vector<AblationRow> cmd_ablate(const AblateOptions& options) {
  check_radius(options.radius);
  EvalContext ctx = open_eval(options.checkpoint, options.dataset, options.split);
  const auto refined = aggregate_by_category(evaluate(ctx, options.radius, options.seed), true);
  ctx.checkpoint.model->set_mu(0.0);
  const auto unrefined = aggregate_by_category(evaluate(ctx, options.radius, options.seed), true);
  std::vector<AblationRow> rows;
  for (std::size_t i = 0; i < refined.size(); ++i) {
    rows.push_back({refined[i].category, refined[i].errors, unrefined[i].errors});
  }
  if (!options.out.empty()) write_text_file(options.out, format_ablation_csv(rows));
  return rows;
}

CompleteOutputs cmd_complete(const CompleteOptions& options) {
  LoadedCheckpoint loaded = load_checkpoint(options.checkpoint);
  for (const auto& w : loaded.warnings) spdlog::warn("{}", w);
  CompletionModel& model = *loaded.model;
  PointCloud input = load_cloud(options.input);
  const std::size_t n = model.config().output_points;
  if (input.size() < n) {
    throw Error(fmt::format("input has {} points, at least {} are required", input.size(), n));
  }
  if (input.size() > n) {
    Rng rng = make_rng(derive_seed(options.seed, {0}));
    input = resample_uniform(input, n, rng).points;
  }
  model.set_training(false);
  const CompletionResult result = model.complete(input, derive_seed(options.seed, {1}));

  fs::create_directories(options.out_dir);
  CompleteOutputs out{options.out_dir / ("missing_pred" + options.extension),
                      options.out_dir / ("merged" + options.extension),
                      options.out_dir / ("refined" + options.extension)};
  save_cloud(out.missing_pred, result.missing_pred);
  save_labeled_cloud(out.merged, result.merged);
  save_cloud(out.refined, result.refined);
  return out;
}

void cmd_toydata(const ToydataOptions& options) {
  if (options.shapes == 0) throw UsageError("toydata needs at least one shape");
  if (options.n_points == 0 || options.n_points % 2 != 0) {
    throw UsageError("toydata point count must be even and positive");
  }
  save_dataset(generate_toy_dataset(options.shapes, options.seed, options.n_points),
               options.out_dir);
}

}  // namespace pcc::cli
