#include "pcc/error.hpp"
#include "pcc/metrics/emd.hpp"
#include "pcc/models/completion_model.hpp"
#include "pcc/models/joint_loss.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace pcc {
namespace {

using testing::random_cloud;

nn::Tensor random_points(std::size_t batch, std::size_t n, Rng& rng) {
  std::vector<PointCloud> clouds;
  for (std::size_t b = 0; b < batch; ++b) clouds.push_back(random_cloud(n, rng));
  return tensor_from_clouds(clouds);
}

nn::Tensor permuted_points(const nn::Tensor& x, Rng& rng) {
  std::vector<std::size_t> order(x.dim(2));
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  nn::Tensor out(x.shape());
  for (std::size_t b = 0; b < x.dim(0); ++b) {
    for (std::size_t c = 0; c < x.dim(1); ++c) {
      for (std::size_t n = 0; n < x.dim(2); ++n) out.at(b, c, n) = x.at(b, c, order[n]);
    }
  }
  return out;
}

TEST(Encoder, FeatureShapeForAnyPointCount) {
  Rng rng(1);
  const ModelConfig c = ModelConfig::toy();
  MpnEncoder enc(c.encoder_widths, c.feature_dim, rng);
  for (std::size_t n : {1u, 7u, 64u}) {
    EXPECT_EQ(enc.forward(random_points(2, n, rng)).shape(), (nn::Shape{2, c.feature_dim}));
  }
  EXPECT_THROW(enc.forward(nn::Tensor({1, 4, 5})), ShapeError);
}

TEST(Encoder, FullSizeFeatureIs1024) {
  Rng rng(2);
  const ModelConfig c;
  MpnEncoder enc(c.encoder_widths, c.feature_dim, rng);
  EXPECT_EQ(enc.forward(random_points(1, 32, rng)).shape(), (nn::Shape{1, 1024}));
}

TEST(Encoder, PermutationInvariant) {
  Rng rng(3);
  const ModelConfig c = ModelConfig::toy();
  MpnEncoder enc(c.encoder_widths, c.feature_dim, rng);
  const nn::Tensor x = random_points(2, 40, rng);
  const nn::Tensor y = permuted_points(x, rng);
  enc.set_training(false);
  EXPECT_EQ(enc.forward(x), enc.forward(y));
  enc.set_training(true);
  const nn::Tensor fx = enc.forward(x), fy = enc.forward(y);
  for (std::size_t i = 0; i < fx.size(); ++i) EXPECT_NEAR(fx[i], fy[i], 1e-12);
}

TEST(MlpDecoder, ShapeAndZeroMap) {
  Rng rng(4);
  const ModelConfig full;
  MlpDecoder big(64, {32, 32}, 1024, rng);
  EXPECT_EQ(big.decode(nn::Tensor({2, 64}, 0.5)).shape(), (nn::Shape{2, 3, 1024}));
  MlpDecoder dec(8, {8, 8}, 4, rng);
  for (auto* p : [&] {
         std::vector<nn::Parameter*> ps;
         dec.collect_parameters(ps);
         return ps;
       }()) {
    p->value.zero();
  }
  const nn::Tensor out = dec.decode(nn::Tensor({1, 8}));
  for (auto v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(MorphingDecoder, ShapeRangeAndSeededSamples) {
  Rng rng(5);
  const ModelConfig c;
  MorphingDecoder dec(32, c.morph_hidden, 1024, 16, rng);
  EXPECT_EQ(dec.points_per_network(), 64u);
  EXPECT_EQ(dec.network(0).input_width(), 32u + 2u);
  Rng frng(6);
  nn::Tensor feature({2, 32});
  std::uniform_real_distribution<double> u(-3, 3);
  for (auto& v : feature.values()) v = u(frng);
  const nn::Tensor a = dec.decode(feature, 9);
  EXPECT_EQ(a.shape(), (nn::Shape{2, 3, 1024}));
  for (auto v : a.values()) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
  ASSERT_EQ(dec.last_samples().size(), 16u);
  const auto samples = dec.last_samples();
  for (const auto& s : samples) {
    EXPECT_EQ(s.shape(), (nn::Shape{2, 2, 64}));
    for (auto v : s.values()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  EXPECT_EQ(dec.decode(feature, 9), a);
  EXPECT_EQ(dec.last_samples(), samples);
  EXPECT_FALSE(dec.decode(feature, 10) == a);
  EXPECT_THROW(MorphingDecoder(8, {4}, 10, 3, rng), InvalidArgument);
}

TEST(Refiner, ShapeAndZeroFinalLayer) {
  Rng rng(7);
  const ModelConfig c = ModelConfig::toy();
  PointRefiner prn(c.refiner_widths, c.refiner_head, rng);
  nn::Tensor x({2, 4, 12});
  Rng data(8);
  std::uniform_real_distribution<double> u(-1, 1);
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t n = 0; n < 12; ++n) {
      for (std::size_t d = 0; d < 3; ++d) x.at(b, d, n) = u(data);
      x.at(b, 3, n) = n % 3 == 0 ? 1 : 0;
    }
  }
  const nn::Tensor disp = prn.forward(x);
  EXPECT_EQ(disp.shape(), (nn::Shape{2, 3, 12}));
  for (auto v : disp.values()) EXPECT_LE(std::abs(v), 1.0);
  EXPECT_EQ(prn.concat_width(), c.refiner_concat_width());
  prn.output_layer().weight().value.zero();
  prn.output_layer().bias().value.zero();
  const nn::Tensor zero = prn.forward(x);
  for (auto v : zero.values()) EXPECT_EQ(v, 0.0);
  x.at(0, 3, 0) = 0.5;
  EXPECT_THROW(prn.forward(x), ShapeError);
}

TEST(CompletionModel, FullSizePipelineCounts) {
  const ModelConfig c;
  CompletionModel model(c, 11);
  model.set_training(false);
  Rng rng(12);
  const PointCloud partial = normalize_cloud(random_cloud(2048, rng));
  const CompletionPass pass = model.forward(tensor_from_cloud(partial), 3);
  EXPECT_EQ(pass.missing_pred.shape(), (nn::Shape{1, 3, 1024}));
  EXPECT_EQ(pass.refiner_input.shape(), (nn::Shape{1, 4, 2048}));
  EXPECT_EQ(pass.refined.shape(), (nn::Shape{1, 3, 2048}));
  const MergeResult& m = pass.merges[0];
  EXPECT_EQ(m.partial_size, 2048u);
  EXPECT_EQ(m.merged.size(), 2048u);
  for (std::size_t i = 0; i < 2048; ++i) {
    ASSERT_LT(m.source_indices[i], 3072u);
    EXPECT_EQ(m.merged.labels[i], m.source_indices[i] >= 2048 ? 1 : 0);
  }
  const CompletionResult r = model.complete(partial, 3);
  EXPECT_EQ(r.missing_pred.size(), 1024u);
  EXPECT_EQ(r.merged.size(), 2048u);
  EXPECT_EQ(r.refined.size(), 2048u);
}

TEST(CompletionModel, MuZeroKeepsMergedPointsAndPartialUntouched) {
  ModelConfig c = ModelConfig::toy();
  c.mu = 0.0;
  CompletionModel model(c, 13);
  Rng rng(14);
  const PointCloud partial = random_cloud(16, rng);
  const CompletionResult r = model.complete(partial, 4);
  EXPECT_EQ(r.refined, r.merged.points);
  for (std::size_t i = 0; i < r.merged.size(); ++i) {
    if (r.merged.labels[i] == 0) {
      EXPECT_NE(std::find(partial.points.begin(), partial.points.end(), r.merged.points[i]),
                partial.points.end());
    }
  }
}

TEST(CompletionModel, DisplacementBoundedByMu) {
  for (double mu : {0.05, 0.5, 1.0}) {
    ModelConfig c = ModelConfig::toy();
    c.mu = mu;
    CompletionModel model(c, 15);
    Rng rng(16);
    const nn::Tensor x = random_points(3, 16, rng);
    const CompletionPass pass = model.forward(x, 5);
    for (std::size_t b = 0; b < 3; ++b) {
      for (std::size_t d = 0; d < 3; ++d) {
        for (std::size_t i = 0; i < 16; ++i) {
          EXPECT_LE(std::abs(pass.refined.at(b, d, i) - pass.refiner_input.at(b, d, i)), mu + 1e-15);
        }
      }
    }
  }
}

TEST(CompletionModel, SetMuMatchesConfiguredMu) {
  CompletionModel model(ModelConfig::toy(), 17);
  model.set_training(false);
  Rng rng(18);
  const PointCloud partial = random_cloud(16, rng);
  model.set_mu(0.0);
  const CompletionResult r = model.complete(partial, 6);
  EXPECT_EQ(r.refined, r.merged.points);
  EXPECT_THROW(model.set_mu(-1.0), InvalidArgument);
}

TEST(CompletionModel, SeededForwardIsDeterministic) {
  for (auto kind : {DecoderKind::kMlp, DecoderKind::kMorphing}) {
    ModelConfig c = ModelConfig::toy();
    c.decoder = kind;
    CompletionModel a(c, 19), b(c, 19);
    Rng rng(20);
    const nn::Tensor x = random_points(2, 16, rng);
    const CompletionPass pa = a.forward(x, 7), pb = b.forward(x, 7);
    EXPECT_EQ(pa.refined, pb.refined);
    EXPECT_EQ(pa.missing_pred, pb.missing_pred);
  }
}

TEST(CompletionModel, FixedSelectionReproducesMerge) {
  CompletionModel model(ModelConfig::toy(), 21);
  Rng rng(22);
  const nn::Tensor x = random_points(2, 16, rng);
  const CompletionPass pass = model.forward(x, 8);
  const CompletionPass again = model.forward(x, 8, &pass.merges);
  EXPECT_EQ(again.refined, pass.refined);
  std::vector<MergeResult> wrong(pass.merges.begin(), pass.merges.begin() + 1);
  EXPECT_THROW(model.forward(x, 8, &wrong), ShapeError);
}

TEST(CompletionModel, RejectsBadInput) {
  CompletionModel model(ModelConfig::toy(), 23);
  EXPECT_THROW(model.forward(nn::Tensor({1, 4, 16}), 1), ShapeError);
  EXPECT_THROW(tensor_from_clouds({}), ShapeError);
}

TEST(JointLoss, PerfectPredictionAndSum) {
  Rng rng(24);
  const PointCloud missing = random_cloud(64, rng);
  const PointCloud complete = random_cloud(128, rng);
  const JointLoss perfect = joint_loss(missing, missing, complete, complete);
  EXPECT_LE(perfect.total, 1e-6);
  const JointLoss l = joint_loss(random_cloud(64, rng), missing, random_cloud(128, rng), complete);
  EXPECT_EQ(l.total, l.missing + l.refined);
}

TEST(JointLoss, SixPointSetsMatchBruteForce) {
  Rng rng(25);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud a = random_cloud(6, rng), b = random_cloud(6, rng);
    const PointCloud c = random_cloud(6, rng), d = random_cloud(6, rng);
    const JointLoss l = joint_loss(a, b, c, d);
    const double expected = testing::brute_force_emd(a, b) + testing::brute_force_emd(c, d);
    EXPECT_NEAR(l.total, expected, 0.01 * expected);
    LossOptions exact;
    exact.solver = EmdSolver::kExact;
    EXPECT_NEAR(joint_loss(a, b, c, d, exact).total, expected, 1e-9);
  }
}

TEST(JointLoss, BatchGradientsMatchFixedMatchingLoss) {
  Rng rng(26);
  const nn::Tensor missing = random_points(2, 8, rng);
  const nn::Tensor refined = random_points(2, 12, rng);
  const std::vector<PointCloud> missing_gt{random_cloud(8, rng), random_cloud(8, rng)};
  const std::vector<PointCloud> complete_gt{random_cloud(12, rng), random_cloud(12, rng)};
  const BatchLoss loss = batch_joint_loss(missing, missing_gt, refined, complete_gt);
  EXPECT_NEAR(fixed_matching_loss(missing, missing_gt, refined, complete_gt, loss.missing_matchings,
                                  loss.refined_matchings),
              loss.loss.total, 1e-12);
  nn::Tensor probe = refined;
  const double h = 1e-6;
  for (std::size_t i : {0u, 5u, 17u, 40u}) {
    const double keep = probe[i];
    probe[i] = keep + h;
    const double up = fixed_matching_loss(missing, missing_gt, probe, complete_gt,
                                          loss.missing_matchings, loss.refined_matchings);
    probe[i] = keep - h;
    const double down = fixed_matching_loss(missing, missing_gt, probe, complete_gt,
                                            loss.missing_matchings, loss.refined_matchings);
    probe[i] = keep;
    EXPECT_NEAR((up - down) / (2 * h), loss.grad_refined[i], 1e-7);
  }
  EXPECT_THROW(batch_joint_loss(missing, {missing_gt[0]}, refined, complete_gt), ShapeError);
}

TEST(ModelConfig, KeyValueRoundTripAndValidation) {
  ModelConfig c = ModelConfig::toy();
  c.decoder = DecoderKind::kMlp;
  c.mu = 0.25;
  c.sampling = SamplingMethod::kMinimumDensity;
  const ModelConfig back = ModelConfig::from_key_values(c.to_key_values());
  EXPECT_EQ(back.to_key_values(), c.to_key_values());
  EXPECT_EQ(parse_decoder_kind("mbd"), DecoderKind::kMorphing);
  EXPECT_THROW(parse_decoder_kind("gan"), InvalidArgument);
  ModelConfig bad = c;
  bad.morph_networks = 3;
  bad.decoder = DecoderKind::kMorphing;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  EXPECT_EQ(parse_size_list(format_size_list({64, 128, 1024})), (std::vector<std::size_t>{64, 128, 1024}));
}

}  // namespace
}  // namespace pcc
