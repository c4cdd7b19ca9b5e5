#include "pcc/error.hpp"
#include "pcc/metrics/chamfer.hpp"
#include "pcc/metrics/emd.hpp"
#include "pcc/metrics/kd_tree.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

namespace pcc {
namespace {

using testing::brute_force_emd;
using testing::brute_force_nearest;
using testing::random_cloud;
using testing::shuffled;

TEST(Chamfer, IdenticalCloudsAreZero) {
  Rng rng(1);
  const PointCloud c = random_cloud(100, rng);
  const DirectionalErrors e = directional_errors(c, c);
  EXPECT_EQ(e.pred_to_gt, 0.0);
  EXPECT_EQ(e.gt_to_pred, 0.0);
  EXPECT_EQ(e.chamfer, 0.0);
}

TEST(Chamfer, HandComputedDirections) {
  const PointCloud pred({Vec3(0, 0, 0)});
  const PointCloud gt({Vec3(1, 0, 0), Vec3(2, 0, 0)});
  const DirectionalErrors e = directional_errors(pred, gt);
  EXPECT_DOUBLE_EQ(e.pred_to_gt, 1.0);
  EXPECT_DOUBLE_EQ(e.gt_to_pred, 2.5);
  EXPECT_DOUBLE_EQ(e.chamfer, 3.5);
}

TEST(Chamfer, ReportScaleIsTenThousand) {
  EXPECT_EQ(kMetricReportScale, 10000.0);
  const DirectionalErrors e = scaled_for_report(
      directional_errors(PointCloud({Vec3(0, 0, 0)}), PointCloud({Vec3(0.01, 0, 0), Vec3(0.02, 0, 0)})));
  EXPECT_NEAR(e.pred_to_gt, 1.0, 1e-9);
  EXPECT_NEAR(e.gt_to_pred, 2.5, 1e-9);
  EXPECT_NEAR(e.chamfer, 3.5, 1e-9);
}

TEST(Chamfer, SymmetryOrderInvarianceAndSum) {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud a = random_cloud(50 + trial, rng);
    const PointCloud b = random_cloud(70, rng);
    const DirectionalErrors ab = directional_errors(a, b);
    const DirectionalErrors ba = directional_errors(b, a);
    EXPECT_EQ(ab.pred_to_gt, ba.gt_to_pred);
    EXPECT_EQ(ab.gt_to_pred, ba.pred_to_gt);
    EXPECT_EQ(ab.chamfer, ab.pred_to_gt + ab.gt_to_pred);
    const DirectionalErrors shuffled_ab = directional_errors(shuffled(a, rng), shuffled(b, rng));
    EXPECT_NEAR(shuffled_ab.chamfer, ab.chamfer, 1e-12);
  }
}

TEST(Chamfer, MatchesLinearScan) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud a = random_cloud(300, rng);
    const PointCloud b = random_cloud(trial + 1, rng);
    EXPECT_NEAR(mean_nearest_squared_distance(a, b), brute_force_nearest(a, b), 1e-12);
    EXPECT_NEAR(mean_nearest_squared_distance(b, a), brute_force_nearest(b, a), 1e-12);
  }
  EXPECT_THROW(mean_nearest_squared_distance(PointCloud{}, random_cloud(3, rng)), InvalidArgument);
}

TEST(KdTree, NearestMatchesScanAndBreaksTiesLow) {
  Rng rng(4);
  PointCloud c = random_cloud(500, rng);
  c.points.push_back(c[17]);
  const KdTree tree(c);
  const auto hit = tree.nearest(c[17]);
  EXPECT_EQ(hit.index, 17u);
  EXPECT_EQ(hit.squared_distance, 0.0);
  for (int q = 0; q < 200; ++q) {
    const Vec3 p = random_cloud(1, rng, 1.5)[0];
    std::size_t best = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
      if ((c[i] - p).squaredNorm() < (c[best] - p).squaredNorm()) best = i;
    }
    EXPECT_EQ(tree.nearest(p).index, best);
  }
}

TEST(EmdExact, IdentityAndSwap) {
  Rng rng(5);
  const PointCloud c = random_cloud(30, rng);
  const Matching m = emd_exact(c, c);
  EXPECT_EQ(m.cost, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(m.assignment[i], i);

  const PointCloud a({Vec3(0, 0, 0), Vec3(1, 0, 0)});
  const PointCloud b({Vec3(1, 0, 0), Vec3(0, 0, 0)});
  const Matching swap = emd_exact(a, b);
  EXPECT_EQ(swap.cost, 0.0);
  EXPECT_EQ(swap.assignment, (std::vector<std::size_t>{1, 0}));
}

TEST(EmdExact, MatchesBruteForceOnSixPoints) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const PointCloud a = random_cloud(6, rng);
    const PointCloud b = random_cloud(6, rng);
    const Matching m = emd_exact(a, b);
    ASSERT_TRUE(is_permutation(m.assignment, 6));
    EXPECT_NEAR(m.cost, brute_force_emd(a, b), 1e-9);
    EXPECT_NEAR(matching_cost(a, b, m.assignment), m.cost, 1e-9);
  }
}

TEST(EmdExact, ZeroOnlyForEqualMultisets) {
  Rng rng(7);
  const PointCloud a = random_cloud(40, rng);
  EXPECT_LE(emd_exact(a, shuffled(a, rng)).cost, 1e-9);
  PointCloud b = a;
  b.points[3].x() += 1e-3;
  EXPECT_GT(emd_exact(a, b).cost, 1e-9);
}

TEST(EmdExact, RejectsMismatchedOrOversizedInput) {
  Rng rng(8);
  EXPECT_THROW(emd_exact(random_cloud(3, rng), random_cloud(4, rng)), InvalidArgument);
  EXPECT_THROW(emd_exact(random_cloud(kMaxExactEmdPoints + 1, rng),
                         random_cloud(kMaxExactEmdPoints + 1, rng)),
               InvalidArgument);
}

TEST(Permutation, Detection) {
  EXPECT_TRUE(is_permutation({2, 0, 1}, 3));
  EXPECT_FALSE(is_permutation({0, 0, 1}, 3));
  EXPECT_FALSE(is_permutation({0, 1, 3}, 3));
  EXPECT_FALSE(is_permutation({0, 1}, 3));
}

TEST(EmdApprox, IdentityWithTightEps) {
  Rng rng(9);
  const PointCloud c = random_cloud(256, rng);
  EXPECT_LE(emd_approx(c, c).cost, 1e-6);
  EXPECT_LE(emd_approx(c, shuffled(c, rng)).cost, 1e-6);
}

TEST(EmdApprox, CloseToExactAndNeverBelowIt) {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    const PointCloud a = random_cloud(128, rng);
    const PointCloud b = random_cloud(128, rng);
    const Matching exact = emd_exact(a, b);
    const Matching approx = emd_approx(a, b);
    ASSERT_TRUE(approx.converged);
    ASSERT_TRUE(is_permutation(approx.assignment, 128));
    EXPECT_GE(approx.cost, exact.cost - 1e-9);
    EXPECT_LE(approx.cost, exact.cost * 1.01);
    EXPECT_NEAR(matching_cost(a, b, approx.assignment), approx.cost, 1e-9);
  }
}

TEST(EmdApprox, CompetingBiddersResolvedOptimally) {
  // Both a0 and a1 are nearest to b0; greedy nearest-first would strand a0 far away.
  const PointCloud a({Vec3(0, 0, 0), Vec3(0.4, 0, 0), Vec3(3, 0, 0), Vec3(3, 1, 0)});
  const PointCloud b({Vec3(0.2, 0, 0), Vec3(-1, 0, 0), Vec3(3, 0.5, 0), Vec3(1.5, 0, 0)});
  std::vector<std::size_t> perm{0, 1, 2, 3}, best_perm;
  double best = std::numeric_limits<double>::infinity();
  do {
    const double cost = matching_cost(a, b, perm);
    if (cost < best) {
      best = cost;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  const Matching m = emd_approx(a, b);
  EXPECT_EQ(m.assignment, best_perm);
  EXPECT_NEAR(m.cost, best, 1e-9);
  EXPECT_EQ(emd_exact(a, b).assignment, best_perm);
}

TEST(EmdGradient, ZeroForIdenticalMatch) {
  Rng rng(11);
  const PointCloud c = random_cloud(10, rng);
  for (const auto& g : emd_gradient(c, c, emd_exact(c, c))) EXPECT_EQ(g, Vec3::Zero());
}

TEST(EmdGradient, SinglePairIsUnitVector) {
  const PointCloud a({Vec3(1, 0, 0)});
  const PointCloud b({Vec3(0, 0, 0)});
  const auto g = emd_gradient(a, b, emd_exact(a, b));
  EXPECT_LT((g[0] - Vec3(1, 0, 0)).norm(), 1e-15);
}

TEST(EmdGradient, MatchesCentralDifferences) {
  Rng rng(12);
  PointCloud a = random_cloud(16, rng);
  const PointCloud b = random_cloud(16, rng);
  const Matching m = emd_exact(a, b);
  const auto grad = emd_gradient(a, b, m);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int d = 0; d < 3; ++d) {
      const double keep = a[i][d];
      a[i][d] = keep + h;
      const double up = matching_cost(a, b, m.assignment);
      a[i][d] = keep - h;
      const double down = matching_cost(a, b, m.assignment);
      a[i][d] = keep;
      const double numeric = (up - down) / (2 * h);
      const double denom = std::max({std::abs(numeric), std::abs(grad[i][d]), 1e-3});
      worst = std::max(worst, std::abs(numeric - grad[i][d]) / denom);
    }
  }
  EXPECT_LT(worst, 1e-5);
}

}  // namespace
}  // namespace pcc
