#include "pcc/cli/app.hpp"

#include "pcc/cli/commands.hpp"
#include "pcc/cli/gradcheck_suite.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include <iostream>
#include <map>
#include <memory>

namespace pcc::cli {
namespace {

void use_stderr_logger(bool quiet) {
  auto logger = spdlog::get("pcc");
  if (!logger) logger = spdlog::stderr_color_mt("pcc");
  spdlog::set_default_logger(logger);
  spdlog::set_level(quiet ? spdlog::level::warn : spdlog::level::info);
}

struct TrainFlags {
  std::string config_file;
  bool resume = false;
  std::size_t stop_after = 0;
  std::map<std::string, std::string> values;
};

TrainConfig build_train_config(CLI::App& sub, const TrainFlags& flags) {
  std::map<std::string, std::string> kv;
  if (!flags.config_file.empty()) {
    try {
      kv = read_key_value_file(flags.config_file);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  for (const auto& key : TrainConfig::keys()) {
    if (sub.get_option("--" + key)->count() > 0) kv[key] = flags.values.at(key);
  }
  std::vector<std::string> errors;
  TrainConfig config = TrainConfig::from_key_values(kv, &errors);
  for (const auto& e : config.validate()) errors.push_back(e);
  if (config.dataset.empty()) errors.push_back("dataset must be set");
  if (config.out_dir.empty()) errors.push_back("out_dir must be set");
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw UsageError(msg);
  }
  return config;
}

void add_eval_flags(CLI::App* sub, EvalOptions& o) {
  sub->add_option("--checkpoint", o.checkpoint, "Checkpoint file")->required();
  sub->add_option("--dataset", o.dataset, "Dataset directory or manifest")->required();
  sub->add_option("--radius", o.radius, "Sphere split radius");
  sub->add_option("--seed", o.seed, "Evaluation seed");
  sub->add_option("--split", o.split, "train, test or all");
  sub->add_option("--out", o.out, "Output CSV")->required();
}

}  // namespace

void tune_allocator() {
#ifdef __GLIBC__
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Point cloud completion: training, evaluation and experiment protocols"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Only log warnings and errors");

  PrepareOptions prepare;
  auto* prepare_cmd = app.add_subcommand("prepare", "Sample a mesh manifest into point clouds");
  prepare_cmd->add_option("--data", prepare.data_dir, "Directory with manifest.csv")->required();
  prepare_cmd->add_option("--out", prepare.out_dir, "Output dataset directory")->required();
  prepare_cmd->add_option("--points", prepare.n_points, "Points per shape");
  prepare_cmd->add_option("--seed", prepare.seed, "Sampling seed");

  TrainFlags train;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--config", train.config_file, "Key/value config file");
  train_cmd->add_flag("--resume", train.resume, "Continue from out_dir/checkpoint.pcc");
  train_cmd->add_option("--stop-after", train.stop_after, "Stop after this many epochs");
  for (const auto& key : TrainConfig::keys()) {
    train_cmd->add_option("--" + key, train.values[key], "Override config key " + key);
  }

  EvalOptions eval;
  add_eval_flags(app.add_subcommand("eval", "Per-category metrics CSV"), eval);

  AblateOptions ablate;
  add_eval_flags(app.add_subcommand("ablate", "Metrics with and without refinement"), ablate);

  RobustnessOptions robust;
  auto* robust_cmd = app.add_subcommand("robustness", "Mean chamfer over a radius sweep");
  robust_cmd->add_option("--checkpoint", robust.checkpoint, "Checkpoint file")->required();
  robust_cmd->add_option("--dataset", robust.dataset, "Dataset directory or manifest")->required();
  robust_cmd->add_option("--radii", robust.radii, "Radii, strictly increasing");
  robust_cmd->add_option("--seed", robust.seed, "Evaluation seed");
  robust_cmd->add_option("--split", robust.split, "train, test or all");
  robust_cmd->add_option("--csv", robust.csv, "Output CSV")->required();
  robust_cmd->add_option("--svg", robust.svg, "Output SVG plot");

  CompleteOptions complete;
  std::string format = "xyz";
  auto* complete_cmd = app.add_subcommand("complete", "Complete one partial cloud");
  complete_cmd->add_option("--checkpoint", complete.checkpoint, "Checkpoint file")->required();
  complete_cmd->add_option("--input", complete.input, "Partial cloud (.xyz or .bin)")->required();
  complete_cmd->add_option("--out", complete.out_dir, "Output directory")->required();
  complete_cmd->add_option("--seed", complete.seed, "Completion seed");
  complete_cmd->add_option("--format", format, "xyz or bin")->check(CLI::IsMember({"xyz", "bin"}));

  GradcheckSuiteOptions grad;
  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference gradient checks");
  grad_cmd->add_option("--corrupt", grad.corrupt, "Entry whose backward is deliberately broken");
  grad_cmd->add_option("--seed", grad.seed, "Input seed");

  ToydataOptions toy;
  auto* toy_cmd = app.add_subcommand("toydata", "Write a procedural toy dataset");
  toy_cmd->add_option("--out", toy.out_dir, "Output dataset directory")->required();
  toy_cmd->add_option("--shapes", toy.shapes, "Number of shapes");
  toy_cmd->add_option("--seed", toy.seed, "Generation seed");
  toy_cmd->add_option("--points", toy.n_points, "Points per shape");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }
  use_stderr_logger(quiet);

  try {
    if (*prepare_cmd) {
      const auto r = cmd_prepare(prepare);
      spdlog::info("wrote {} shapes, skipped {}", r.written, r.skipped.size());
    } else if (*train_cmd) {
      TrainOptions o{build_train_config(*train_cmd, train), train.resume, train.stop_after};
      const auto r = cmd_train(o);
      spdlog::info("{} epochs completed", r.epochs_completed);
    } else if (app.got_subcommand("eval")) {
      cmd_eval(eval);
    } else if (app.got_subcommand("ablate")) {
      cmd_ablate(ablate);
    } else if (*robust_cmd) {
      cmd_robustness(robust);
    } else if (*complete_cmd) {
      complete.extension = "." + format;
      cmd_complete(complete);
    } else if (*grad_cmd) {
      if (!grad.corrupt.empty()) {
        const auto names = gradcheck_suite_names();
        if (std::find(names.begin(), names.end(), grad.corrupt) == names.end()) {
          throw UsageError("unknown gradcheck entry '" + grad.corrupt + "'");
        }
      }
      const auto report = run_gradcheck_suite(grad);
      std::cout << format_gradcheck_report(report);
      if (!report.passed()) return kExitGradcheck;
    } else if (*toy_cmd) {
      cmd_toydata(toy);
    }
  } catch (const UsageError& e) {
    spdlog::error("{}", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace pcc::cli
