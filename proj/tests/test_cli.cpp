#include "pcc/cli/app.hpp"
#include "pcc/cli/commands.hpp"
#include "pcc/cli/gradcheck_suite.hpp"
#include "pcc/cli/report.hpp"
#include "pcc/geometry/cloud_io.hpp"
#include "pcc/geometry/mesh_io.hpp"
#include "pcc/training/toy_shapes.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace pcc::cli {
namespace {

using pcc::testing::read_bytes;
using pcc::testing::TempDir;

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  return out;
}

class TrainedToy : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli_toy");
    cmd_toydata({5, 11, 512, *dir_ / "data"});
    TrainConfig c;
    c.model = "toy";
    c.epochs = 2;
    c.batch_size = 2;
    c.dataset = (*dir_ / "data").string();
    c.out_dir = (*dir_ / "run").string();
    cmd_train({c});
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static std::filesystem::path data() { return *dir_ / "data"; }
  static std::filesystem::path checkpoint() { return *dir_ / "run" / kCheckpointFile; }
  static std::filesystem::path scratch(const std::string& name) { return *dir_ / name; }

  static TempDir* dir_;
};

TempDir* TrainedToy::dir_ = nullptr;

TEST(Helpers, RadiusSweepAndSplits) {
  EXPECT_EQ(radius_sweep(0.25, 0.55, 0.05),
            (std::vector<double>{0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55}));
  const Dataset d = generate_toy_dataset(10, 1, 64);
  EXPECT_EQ(select_split(d, "test").size(), 2u);
  EXPECT_EQ(select_split(d, "train").size(), 8u);
  EXPECT_EQ(select_split(d, "all").size(), 10u);
  EXPECT_THROW(select_split(d, "val"), UsageError);
}

TEST(Prepare, SamplesMeshesAndSkipsBrokenOnes) {
  TempDir dir("prepare");
  std::filesystem::create_directories(dir / "in");
  TriangleMesh tet;
  tet.vertices = {{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}};
  tet.faces = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  save_off(dir / "in" / "a.off", tet);
  save_off(dir / "in" / "b.off", tet);
  save_off(dir / "in" / "c.off", tet);
  {
    std::ofstream out(dir / "in" / "broken.off");
    out << "OFF\n4 1 0\n0 0 0\n";
  }
  {
    std::ofstream out(dir / "in" / "manifest.csv");
    out << "path,category,split\na.off,tet,train\nb.off,tet,train\nbroken.off,tet,train\n"
           "c.off,pyramid,test\n";
  }
  const PrepareResult r = cmd_prepare({dir / "in", dir / "out", 256, 3});
  EXPECT_EQ(r.written, 3u);
  ASSERT_EQ(r.skipped.size(), 1u);
  EXPECT_NE(r.skipped[0].find("broken.off"), std::string::npos);
  EXPECT_EQ(read_bytes(dir / "out" / "summary.csv"), "category,count\npyramid,1\ntet,2\n");

  const Dataset d = load_dataset(dir / "out");
  ASSERT_EQ(d.shapes.size(), 3u);
  EXPECT_EQ(d.shapes[0].cloud.size(), 256u);
  EXPECT_LE(max_norm(d.shapes[0].cloud), 1.0 + 1e-6);
  EXPECT_FALSE(d.shapes[0].cloud == d.shapes[1].cloud);

  cmd_prepare({dir / "in", dir / "again", 256, 3});
  EXPECT_EQ(read_bytes(dir / "again" / "clouds" / "00000_a.bin"),
            read_bytes(dir / "out" / "clouds" / "00000_a.bin"));
  EXPECT_EQ(read_bytes(dir / "again" / "manifest.csv"), read_bytes(dir / "out" / "manifest.csv"));
}

TEST(RunCli, ExitCodes) {
  TempDir dir("exit");
  EXPECT_EQ(run_cli({"--help"}), kExitOk);
  EXPECT_EQ(run_cli({"--quiet", "frobnicate"}), kExitUsage);
  EXPECT_EQ(run_cli({"--quiet", "eval", "--dataset", "x"}), kExitUsage);
  EXPECT_EQ(run_cli({"--quiet", "train", "--model", "toy", "--lr", "fast", "--radius", "2",
                     "--dataset", "d", "--out_dir", (dir / "r").string()}),
            kExitUsage);
  EXPECT_EQ(run_cli({"--quiet", "train", "--config", (dir / "missing.cfg").string()}), kExitUsage);
  EXPECT_EQ(run_cli({"--quiet", "eval", "--checkpoint", (dir / "none.pcc").string(), "--dataset",
                     (dir / "none").string(), "--out", (dir / "m.csv").string()}),
            kExitRuntime);
  EXPECT_EQ(run_cli({"--quiet", "gradcheck", "--corrupt", "nothing"}), kExitUsage);
}

TEST(RunCli, GradcheckCorruptionExitsThree) {
  EXPECT_EQ(run_cli({"--quiet", "gradcheck", "--corrupt", "shared_linear"}), kExitGradcheck);
}

TEST(RunCli, ToydataTrainEvalEndToEnd) {
  TempDir dir("e2e");
  ASSERT_EQ(run_cli({"--quiet", "toydata", "--out", (dir / "data").string(), "--shapes", "4",
                     "--points", "256"}),
            kExitOk);
  {
    std::ofstream out(dir / "toy.cfg");
    out << "model = toy\nepochs = 1\nbatch_size = 4\n";
  }
  for (const char* decoder : {"mlp", "mbd"}) {
    const auto run = dir / (std::string("run_") + decoder);
    ASSERT_EQ(run_cli({"--quiet", "train", "--config", (dir / "toy.cfg").string(), "--decoder",
                       decoder, "--dataset", (dir / "data").string(), "--out_dir", run.string()}),
              kExitOk)
        << decoder;
    const auto log = lines_of(read_bytes(run / kTrainLogFile));
    ASSERT_EQ(log.size(), 2u);
    EXPECT_EQ(log[0], "epoch,loss_total,loss_missing,loss_refined,seconds");
    EXPECT_EQ(load_checkpoint(run / kCheckpointFile).train_config.to_key_values().at("decoder"),
              decoder);
    EXPECT_EQ(run_cli({"--quiet", "eval", "--checkpoint", (run / kCheckpointFile).string(),
                       "--dataset", (dir / "data").string(), "--split", "train", "--out",
                       (run / "metrics.csv").string()}),
              kExitOk);
    EXPECT_TRUE(std::filesystem::exists(run / "metrics.csv"));
  }
}

TEST(Reports, MetricsCsvLayout) {
  const std::vector<CategoryMetrics> rows{{"chair", {0.001, 0.002, 0.003}, 2},
                                          {"overall", {0.001, 0.002, 0.003}, 2}};
  const auto lines = lines_of(format_metrics_csv(rows));
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].front(), '#');
  EXPECT_EQ(lines[1], "category,pred_to_gt,gt_to_pred,chamfer");
  EXPECT_EQ(lines[2], "chair,10.000000,20.000000,30.000000");
}

TEST(Reports, RobustnessSvgIsDeterministic) {
  const std::vector<RobustnessRow> rows{{0.25, 1.0}, {0.3, 2.5}, {0.35, 2.0}};
  const std::string svg = format_robustness_svg(rows);
  EXPECT_EQ(svg, format_robustness_svg(rows));
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  const auto csv = lines_of(format_robustness_csv(rows));
  ASSERT_EQ(csv.size(), 5u);
  EXPECT_EQ(csv[1], "radius,mean_chamfer");
  EXPECT_EQ(csv[3], "0.3,2.500000");
}

TEST(Gradcheck, SuitePassesAndNamesCorruptedLayer) {
  const GradcheckSuiteReport ok = run_gradcheck_suite();
  EXPECT_TRUE(ok.passed()) << format_gradcheck_report(ok);
  EXPECT_EQ(ok.entries.size(), gradcheck_suite_names().size());
  const auto lines = lines_of(format_gradcheck_report(ok));
  EXPECT_EQ(lines.size(), ok.entries.size());

  GradcheckSuiteOptions bad;
  bad.corrupt = "batch_norm.train";
  const GradcheckSuiteReport broken = run_gradcheck_suite(bad);
  EXPECT_FALSE(broken.passed());
  ASSERT_EQ(broken.failures().size(), 1u);
  EXPECT_EQ(broken.failures()[0], "batch_norm.train");
  EXPECT_NE(format_gradcheck_report(broken).find("batch_norm"), std::string::npos);
}

TEST_F(TrainedToy, EvalIsDeterministicAndOrdered) {
  EvalOptions o{checkpoint(), data(), 0.35, kDefaultEvalSeed, "all", scratch("eval_a.csv")};
  const auto rows = cmd_eval(o);
  o.out = scratch("eval_b.csv");
  cmd_eval(o);
  EXPECT_EQ(read_bytes(scratch("eval_a.csv")), read_bytes(scratch("eval_b.csv")));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].category, "sphere");
  EXPECT_EQ(rows.back().category, "overall");
  EXPECT_EQ(rows.back().count, 5u);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.errors.chamfer, r.errors.pred_to_gt + r.errors.gt_to_pred, 1e-12);
  }
  const auto lines = lines_of(read_bytes(scratch("eval_a.csv")));
  const auto overall = split_csv(lines.back());
  EXPECT_NEAR(std::stod(overall[1]), rows.back().errors.pred_to_gt * kMetricReportScale, 1e-5);

  o.radius = 1.0;
  EXPECT_THROW(cmd_eval(o), UsageError);
  o.radius = 0.35;
  o.split = "test";
  o.out = scratch("eval_test.csv");
  EXPECT_EQ(cmd_eval(o).size(), 2u);
}

TEST_F(TrainedToy, RobustnessWritesSevenRows) {
  RobustnessOptions o;
  o.checkpoint = checkpoint();
  o.dataset = data();
  o.split = "all";
  o.csv = scratch("robust.csv");
  o.svg = scratch("robust.svg");
  const auto rows = cmd_robustness(o);
  ASSERT_EQ(rows.size(), 7u);
  EXPECT_EQ(rows.front().radius, 0.25);
  EXPECT_EQ(rows.back().radius, 0.55);
  const auto csv = lines_of(read_bytes(o.csv));
  ASSERT_EQ(csv.size(), 9u);
  EXPECT_EQ(split_csv(csv[2])[0], "0.25");
  EXPECT_EQ(split_csv(csv[8])[0], "0.55");
  EXPECT_TRUE(std::filesystem::exists(o.svg));

  const std::string first_svg = read_bytes(o.svg);
  cmd_robustness(o);
  EXPECT_EQ(read_bytes(o.svg), first_svg);

  o.radii = {0.3, 0.3};
  EXPECT_THROW(cmd_robustness(o), UsageError);
}

TEST_F(TrainedToy, AblationUnrefinedIsMergedCloud) {
  const AblateOptions o{checkpoint(), data(), 0.35, kDefaultEvalSeed, "all", scratch("abl.csv")};
  const auto rows = cmd_ablate(o);
  LoadedCheckpoint ckpt = load_checkpoint(checkpoint());
  const Dataset d = load_dataset(data(), kShapePoints, ckpt.train_config.seed);
  const auto sizes = sample_sizes_for(ckpt.model->config());
  const auto evals = evaluate_shapes(d, d.all_indices(), 0.35, kDefaultEvalSeed, sizes,
                                     model_completer(*ckpt.model));
  const auto merged = aggregate_by_category(evals, false);
  const auto refined = aggregate_by_category(evals, true);
  ASSERT_EQ(rows.size(), merged.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].category, merged[i].category);
    EXPECT_DOUBLE_EQ(rows[i].unrefined.chamfer, merged[i].errors.chamfer);
    EXPECT_DOUBLE_EQ(rows[i].refined.chamfer, refined[i].errors.chamfer);
  }
  EXPECT_EQ(split_csv(lines_of(read_bytes(o.out))[1]).size(), 7u);
}

TEST_F(TrainedToy, CompleteWritesThreeClouds) {
  const Dataset d = load_dataset(data());
  save_cloud(scratch("partial.xyz"), d.shapes[0].cloud);
  const CompleteOptions o{checkpoint(), scratch("partial.xyz"), scratch("complete_a"), 9, ".xyz"};
  const CompleteOutputs out = cmd_complete(o);
  EXPECT_EQ(load_cloud(out.missing_pred).size(), 8u);
  EXPECT_EQ(load_cloud(out.refined).size(), 16u);
  const auto merged_lines = lines_of(read_bytes(out.merged));
  ASSERT_EQ(merged_lines.size(), 16u);
  EXPECT_EQ(split_csv(merged_lines[0]).size(), 1u);
  std::istringstream row(merged_lines[0]);
  std::vector<std::string> cols;
  for (std::string c; row >> c;) cols.push_back(c);
  EXPECT_EQ(cols.size(), 4u);

  CompleteOptions again = o;
  again.out_dir = scratch("complete_b");
  const CompleteOutputs out_b = cmd_complete(again);
  EXPECT_EQ(read_bytes(out.refined), read_bytes(out_b.refined));
  EXPECT_EQ(read_bytes(out.merged), read_bytes(out_b.merged));

  PointCloud tiny;
  tiny.points.assign(d.shapes[0].cloud.points.begin(), d.shapes[0].cloud.points.begin() + 10);
  save_cloud(scratch("tiny.xyz"), tiny);
  CompleteOptions small = o;
  small.input = scratch("tiny.xyz");
  EXPECT_THROW(cmd_complete(small), Error);
}

TEST_F(TrainedToy, ResumeMatchesUninterruptedRun) {
  TrainConfig c;
  c.model = "toy";
  c.epochs = 4;
  c.batch_size = 2;
  c.dataset = data().string();
  c.out_dir = scratch("straight").string();
  cmd_train({c});
  c.out_dir = scratch("split").string();
  cmd_train({c, false, 2});
  EXPECT_EQ(load_checkpoint(scratch("split") / kCheckpointFile).epochs_completed, 2u);
  cmd_train({c, true, 0});
  LoadedCheckpoint resumed = load_checkpoint(scratch("split") / kCheckpointFile);
  LoadedCheckpoint straight = load_checkpoint(scratch("straight") / kCheckpointFile);
  EXPECT_EQ(resumed.epochs_completed, 4u);
  const auto pa = resumed.model->parameters(), pb = straight.model->parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i]->value, pb[i]->value) << pa[i]->name;
    EXPECT_EQ(pa[i]->adam_m, pb[i]->adam_m) << pa[i]->name;
    EXPECT_EQ(pa[i]->adam_v, pb[i]->adam_v) << pa[i]->name;
  }
  const auto a = lines_of(read_bytes(scratch("split") / kTrainLogFile));
  const auto b = lines_of(read_bytes(scratch("straight") / kTrainLogFile));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 1; i < a.size(); ++i) {
    const auto ra = split_csv(a[i]), rb = split_csv(b[i]);
    EXPECT_EQ(std::vector<std::string>(ra.begin(), ra.end() - 1),
              std::vector<std::string>(rb.begin(), rb.end() - 1));
  }
}

}  // namespace
}  // namespace pcc::cli
