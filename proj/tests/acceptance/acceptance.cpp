#include "pcc/cli/app.hpp"
#include "pcc/cli/commands.hpp"
#include "pcc/cli/gradcheck_suite.hpp"
#include "pcc/geometry/sampling.hpp"
#include "pcc/geometry/shape_sample.hpp"
#include "pcc/metrics/chamfer.hpp"
#include "pcc/metrics/emd.hpp"
#include "pcc/models/completion_model.hpp"
#include "pcc/training/toy_shapes.hpp"
#include "test_util.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <set>

namespace pcc {
namespace {

using cli::AblateOptions;
using cli::EvalOptions;
using cli::RobustnessOptions;
using testing::random_cloud;
using testing::read_bytes;
using testing::shuffled;
using testing::TempDir;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

constexpr Seed kToySeed = 1;
constexpr Seed kTrainSeed = 3;
constexpr double kTrainedRadius = 0.35;

/// Toy dataset, untrained and 300-epoch checkpoints, shared by criteria 6 to 9.
class OverfitRun {
 public:
  OverfitRun() : dir_("acceptance") {}

  const std::filesystem::path& dir() const { return dir_.path(); }
  std::filesystem::path data() const { return dir_ / "toy"; }
  std::filesystem::path trained() const { return dir_ / "trained" / cli::kCheckpointFile; }
  std::filesystem::path untrained() const { return dir_ / "untrained.pcc"; }

  TrainConfig config(const std::string& run) const {
    TrainConfig c;
    c.model = "full";
    c.decoder = DecoderKind::kMorphing;
    c.epochs = 300;
    c.batch_size = 4;
    c.lr = 0.001;
    c.radius = kTrainedRadius;
    c.seed = kTrainSeed;
    c.checkpoint_every = 50;
    c.dataset = data().string();
    c.out_dir = (dir_ / run).string();
    return c;
  }

  void ensure_data() {
    if (has_data_) return;
    cli::cmd_toydata({4, kToySeed, kShapePoints, data()});
    has_data_ = true;
  }

  const std::vector<EpochStats>& ensure_trained() {
    if (!epochs_.empty()) return epochs_;
    ensure_data();
    const TrainConfig c = config("trained");
    Trainer fresh(c, init_seed_for(c));
    save_checkpoint(untrained(), fresh.model(), c, 0);
    const Stopwatch clock;
    epochs_ = cli::cmd_train({c}).epochs;
    train_seconds_ = clock.seconds();
    return epochs_;
  }

  double train_seconds() const { return train_seconds_; }

 private:
  TempDir dir_;
  bool has_data_ = false;
  std::vector<EpochStats> epochs_;
  double train_seconds_ = 0.0;
};

OverfitRun& overfit() {
  static OverfitRun run;
  return run;
}

EvalOptions eval_options(const std::filesystem::path& checkpoint, const std::filesystem::path& out) {
  return {checkpoint, overfit().data(), kTrainedRadius, kDefaultEvalSeed, "train", out};
}

Outcome gradient_suite() {
  const Stopwatch clock;
  const cli::GradcheckSuiteReport report = cli::run_gradcheck_suite();
  const double seconds = clock.seconds();
  const std::vector<std::string> required{
      "shared_linear", "fully_connected", "batch_norm.train", "batch_norm.eval", "relu", "tanh",
      "max_pool", "mpn.mlp", "mpn.mbd", "prn"};
  std::set<std::string> present;
  double worst_layer = 0.0, worst_composed = 0.0;
  for (const auto& e : report.entries) {
    present.insert(e.name);
    double& worst = e.tolerance <= cli::kLayerTolerance ? worst_layer : worst_composed;
    worst = std::max(worst, e.max_error());
  }
  bool covered = true;
  for (const auto& name : required) covered = covered && present.count(name) > 0;
  const bool pass = report.passed() && covered && worst_layer < 1e-5 && worst_composed < 1e-4 &&
                    seconds < 60.0;
  return {pass, fmt::format("{} checks, worst layer {:.2e}, worst composed {:.2e}, {:.1f}s",
                            report.entries.size(), worst_layer, worst_composed, seconds)};
}

Outcome emd_oracle() {
  const Stopwatch clock;
  Rng rng(20240601);
  double worst_exact = 0.0;
  for (int i = 0; i < 200; ++i) {
    const PointCloud a = random_cloud(6, rng), b = random_cloud(6, rng);
    worst_exact = std::max(worst_exact, std::abs(emd_exact(a, b).cost - testing::brute_force_emd(a, b)));
  }
  double worst_rel = 0.0;
  for (int i = 0; i < 50; ++i) {
    const PointCloud a = random_cloud(128, rng), b = random_cloud(128, rng);
    const double exact = emd_exact(a, b).cost;
    worst_rel = std::max(worst_rel, std::abs(emd_approx(a, b).cost - exact) / exact);
  }
  const double seconds = clock.seconds();
  const bool pass = worst_exact <= 1e-9 && worst_rel <= 0.01 && seconds < 120.0;
  return {pass, fmt::format("exact vs brute force {:.1e}, approx vs exact {:.3f}%, {:.1f}s",
                            worst_exact, 100.0 * worst_rel, seconds)};
}

Outcome metric_identities() {
  Rng rng(3);
  bool pass = true;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const PointCloud a = random_cloud(200, rng);
    const PointCloud b = shuffled(a, rng);
    const DirectionalErrors self = directional_errors(a, b);
    const double exact = emd_exact(a, b).cost, approx = emd_approx(a, b).cost;
    pass = pass && self.chamfer <= 1e-9 && exact <= 1e-9 && approx <= 1e-6;
    worst = std::max({worst, self.chamfer, exact, approx});
    const PointCloud c = random_cloud(150, rng);
    const DirectionalErrors e = directional_errors(a, c);
    pass = pass && e.chamfer == e.pred_to_gt + e.gt_to_pred;
  }
  PointCloud pred, gt;
  pred.points = {{0, 0, 0}, {1, 0, 0}};
  gt.points = {{0, 0, 0}, {0, 2, 0}};
  const DirectionalErrors hand = scaled_for_report(directional_errors(pred, gt));
  pass = pass && hand.pred_to_gt == 5000.0 && hand.gt_to_pred == 20000.0 && hand.chamfer == 25000.0;
  return {pass, fmt::format("self distances <= {:.1e}, hand case x1e4 = {}/{}/{}", worst,
                            hand.pred_to_gt, hand.gt_to_pred, hand.chamfer)};
}

Outcome sampling_invariants() {
  Rng rng(44);
  std::uniform_int_distribution<std::size_t> size(2, 256);
  const double sigma = 0.3;
  std::size_t fps_steps = 0, mds_steps = 0, bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const PointCloud c = random_cloud(size(rng), rng);
    const std::size_t n = c.size();
    const Subsample f = farthest_point_sample(c, n, trial);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    std::vector<char> taken(n, 0);
    for (std::size_t t = 0; t < n; ++t) {
      const std::size_t pick = f.indices[t];
      if (t > 0) {
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (taken[i]) continue;
          double d = std::numeric_limits<double>::infinity();
          for (std::size_t j = 0; j < n; ++j) {
            if (taken[j]) d = std::min(d, (c[i] - c[j]).squaredNorm());
          }
          best = std::max(best, d);
          if (i == pick) nearest[i] = d;
        }
        if (taken[pick] || nearest[pick] != best) ++bad;
        ++fps_steps;
      }
      taken[pick] = 1;
    }

    const Subsample m = minimum_density_sample(c, n, sigma, trial);
    std::vector<char> used(n, 0);
    used[m.indices[0]] = 1;
    for (std::size_t t = 1; t < n; ++t) {
      auto density = [&](std::size_t i) {
        double d = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (used[j]) d += std::exp(-(c[i] - c[j]).squaredNorm() / (2 * sigma * sigma));
        }
        return d;
      };
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        if (!used[i]) best = std::min(best, density(i));
      }
      const std::size_t pick = m.indices[t];
      if (used[pick] || density(pick) > best + 1e-12) ++bad;
      used[pick] = 1;
      ++mds_steps;
    }
  }

  std::size_t split_cases = 0;
  std::uniform_real_distribution<double> radius(0.05, 1.5);
  for (int trial = 0; trial < 1000; ++trial) {
    const PointCloud c = random_cloud(size(rng), rng);
    const Vec3 center = c[std::uniform_int_distribution<std::size_t>(0, c.size() - 1)(rng)];
    const double r = radius(rng);
    const SplitResult s = sphere_split(c, center, r);
    std::vector<std::size_t> inside, outside;
    for (std::size_t i = 0; i < c.size(); ++i) {
      ((c[i] - center).norm() <= r ? inside : outside).push_back(i);
    }
    if (s.inside.size() + s.outside.size() != c.size() || s.inside.size() != inside.size()) {
      ++bad;
      continue;
    }
    bool same = true;
    for (std::size_t i = 0; i < inside.size(); ++i) same = same && s.inside[i] == c[inside[i]];
    for (std::size_t i = 0; i < outside.size(); ++i) same = same && s.outside[i] == c[outside[i]];
    if (!same) ++bad;
    ++split_cases;
  }
  return {bad == 0, fmt::format("{} FPS steps, {} MDS steps, {} split cases, {} violations",
                                fps_steps, mds_steps, split_cases, bad)};
}

Outcome pipeline_contract() {
  const ModelConfig c;
  CompletionModel model(c, 17);
  model.set_training(false);
  const Dataset toy = generate_toy_dataset(4, 5, kShapePoints);
  std::size_t passes = 0;
  bool pass = true;
  for (std::size_t i = 0; i < toy.shapes.size(); ++i) {
    const ShapeSample s = make_sample(toy.shapes[i].cloud, 0.35, derive_seed(9, {i}));
    pass = pass && s.complete.size() == 2048 && s.partial.size() == 2048 && s.missing.size() == 1024;
    const CompletionPass p = model.forward(tensor_from_cloud(s.partial), derive_seed(9, {i, 1}));
    pass = pass && p.missing_pred.shape() == nn::Shape{1, 3, 1024} &&
           p.refiner_input.shape() == nn::Shape{1, 4, 2048} &&
           p.refined.shape() == nn::Shape{1, 3, 2048};
    const MergeResult& m = p.merges.at(0);
    pass = pass && m.partial_size == 2048 && m.merged.size() == 2048 &&
           m.source_indices.size() == 2048;
    for (std::size_t k = 0; k < m.merged.size(); ++k) {
      const int expected = m.source_indices[k] >= 2048 ? 1 : 0;
      pass = pass && m.source_indices[k] < 3072 && m.merged.labels[k] == expected &&
             p.refiner_input.at(0, 3, k) == expected;
    }
    ++passes;
  }
  return {pass, fmt::format("{} eval-mode forwards: 2048 -> 1024 -> 3072 -> 2048 -> 2048", passes)};
}

Outcome overfit_trend() {
  OverfitRun& run = overfit();
  const auto& epochs = run.ensure_trained();
  const double first = epochs.front().loss_total, last = epochs.back().loss_total;
  const auto before = cli::cmd_eval(eval_options(run.untrained(), run.dir() / "untrained.csv"));
  const auto after = cli::cmd_eval(eval_options(run.trained(), run.dir() / "trained.csv"));
  const double cd0 = before.back().errors.chamfer, cd1 = after.back().errors.chamfer;
  const bool loss_ok = last <= 0.1 * first;
  const bool chamfer_ok = cd1 <= 0.1 * cd0;
  return {loss_ok && chamfer_ok,
          fmt::format("loss {:.5f} -> {:.5f} (ratio {:.3f}, {}), chamfer {:.5f} -> {:.5f} "
                      "(ratio {:.3f}, {}), {} epochs in {:.0f}s",
                      first, last, last / first, loss_ok ? "ok" : "above 0.1", cd0, cd1, cd1 / cd0,
                      chamfer_ok ? "ok" : "above 0.1", epochs.size(), run.train_seconds())};
}

Outcome refinement_ablation() {
  OverfitRun& run = overfit();
  run.ensure_trained();
  const auto rows = cli::cmd_ablate(eval_options(run.trained(), run.dir() / "ablation.csv"));
  const double with = rows.back().refined.chamfer, without = rows.back().unrefined.chamfer;
  return {with <= without,
          fmt::format("mean chamfer x1e4 with refinement {:.2f}, without {:.2f}",
                      with * kMetricReportScale, without * kMetricReportScale)};
}

RobustnessOptions robustness_options(const std::filesystem::path& csv,
                                     const std::filesystem::path& svg) {
  RobustnessOptions o;
  o.checkpoint = overfit().trained();
  o.dataset = overfit().data();
  o.split = "train";
  o.csv = csv;
  o.svg = svg;
  return o;
}

Outcome robustness_protocol() {
  OverfitRun& run = overfit();
  run.ensure_trained();
  const auto csv = run.dir() / "robustness.csv", svg = run.dir() / "robustness.svg";
  const auto rows = cli::cmd_robustness(robustness_options(csv, svg));
  std::size_t csv_rows = 0;
  {
    std::istringstream in(read_bytes(csv));
    for (std::string line; std::getline(in, line);) {
      if (!line.empty() && line[0] != '#' && line.rfind("radius", 0) != 0) ++csv_rows;
    }
  }
  const bool svg_ok = read_bytes(svg).find("<polyline") != std::string::npos;
  const auto at = [&](double r) {
    for (const auto& row : rows) {
      if (std::abs(row.radius - r) < 1e-9) return row.mean_chamfer;
    }
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double r35 = at(0.35), r55 = at(0.55);
  const bool pass = rows.size() == 7 && csv_rows == 7 && svg_ok && r55 >= r35;
  std::string values;
  for (const auto& row : rows) values += fmt::format(" {}:{:.1f}", row.radius, row.mean_chamfer);
  return {pass, fmt::format("{} rows, svg {}, chamfer x1e4{}", csv_rows, svg_ok ? "written" : "missing",
                            values)};
}

Outcome determinism() {
  OverfitRun& run = overfit();
  run.ensure_trained();
  const auto d = run.dir();
  cli::cmd_eval(eval_options(run.trained(), d / "eval_1.csv"));
  cli::cmd_eval(eval_options(run.trained(), d / "eval_2.csv"));
  cli::cmd_ablate(eval_options(run.trained(), d / "ablate_1.csv"));
  cli::cmd_ablate(eval_options(run.trained(), d / "ablate_2.csv"));
  cli::cmd_robustness(robustness_options(d / "robust_1.csv", d / "robust_1.svg"));
  cli::cmd_robustness(robustness_options(d / "robust_2.csv", d / "robust_2.svg"));
  const bool csv_same = read_bytes(d / "eval_1.csv") == read_bytes(d / "eval_2.csv") &&
                        read_bytes(d / "ablate_1.csv") == read_bytes(d / "ablate_2.csv") &&
                        read_bytes(d / "robust_1.csv") == read_bytes(d / "robust_2.csv") &&
                        read_bytes(d / "robust_1.svg") == read_bytes(d / "robust_2.svg");

  TrainConfig c = run.config("straight");
  c.epochs = 5;
  const auto straight = cli::cmd_train({c}).epochs;
  c.out_dir = (d / "resumed").string();
  cli::cmd_train({c, false, 2});
  const auto resumed = cli::cmd_train({c, true, 0}).epochs;
  bool losses_same = resumed.size() == 3;
  for (std::size_t i = 0; losses_same && i < resumed.size(); ++i) {
    const EpochStats &a = resumed[i], &b = straight[i + 2];
    losses_same = a.epoch == b.epoch && a.loss_total == b.loss_total &&
                  a.loss_missing == b.loss_missing && a.loss_refined == b.loss_refined;
  }
  const LoadedCheckpoint a = load_checkpoint(d / "resumed" / cli::kCheckpointFile);
  const LoadedCheckpoint b = load_checkpoint(d / "straight" / cli::kCheckpointFile);
  bool params_same = a.epochs_completed == b.epochs_completed;
  const auto pa = a.model->parameters(), pb = b.model->parameters();
  params_same = params_same && pa.size() == pb.size();
  for (std::size_t i = 0; params_same && i < pa.size(); ++i) {
    params_same = pa[i]->value == pb[i]->value && pa[i]->adam_m == pb[i]->adam_m &&
                  pa[i]->adam_v == pb[i]->adam_v && pa[i]->adam_step == pb[i]->adam_step;
  }
  const auto ba = a.model->buffers(), bb = b.model->buffers();
  params_same = params_same && ba.size() == bb.size();
  for (std::size_t i = 0; params_same && i < ba.size(); ++i) params_same = *ba[i].tensor == *bb[i].tensor;
  return {csv_same && losses_same && params_same,
          fmt::format("reruns byte-identical: {}, resumed epochs 3-5 losses identical: {}, "
                      "final parameters and optimizer state identical: {}",
                      csv_same, losses_same, params_same)};
}

}  // namespace
}  // namespace pcc

int main(int argc, char** argv) {
  pcc::cli::tune_allocator();
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::function<pcc::Outcome()>> criteria{
      pcc::gradient_suite,    pcc::emd_oracle,          pcc::metric_identities,
      pcc::sampling_invariants, pcc::pipeline_contract, pcc::overfit_trend,
      pcc::refinement_ablation, pcc::robustness_protocol, pcc::determinism};
  std::set<std::size_t> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoul(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected.empty() && !selected.count(i + 1)) continue;
    pcc::Outcome outcome;
    try {
      outcome = criteria[i]();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    fmt::print("criterion {}: {} ({})\n", i + 1, outcome.pass ? "PASS" : "FAIL", outcome.detail);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
