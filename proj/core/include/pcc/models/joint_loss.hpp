#pragma once

#include "pcc/geometry/point_cloud.hpp"
#include "pcc/metrics/emd.hpp"
#include "pcc/nn/tensor.hpp"

#include <vector>

namespace pcc {

enum class EmdSolver { kAuction, kExact };

struct LossOptions {
  EmdSolver solver = EmdSolver::kAuction;
  AuctionOptions auction{};
};

/// total = EMD(missing_pred, missing_gt) + EMD(refined, complete_gt)
struct JointLoss {
  double total = 0.0;
  double missing = 0.0;
  double refined = 0.0;
};

Matching solve_emd(const PointCloud& a, const PointCloud& b, const LossOptions& options);

JointLoss joint_loss(const PointCloud& missing_pred, const PointCloud& missing_gt,
                     const PointCloud& refined, const PointCloud& complete_gt,
                     const LossOptions& options = {});

/// Batch-mean joint loss with its gradients on the predicted tensors (matchings held fixed).
struct BatchLoss {
  JointLoss loss;
  nn::Tensor grad_missing;  // [B, 3, M]
  nn::Tensor grad_refined;  // [B, 3, N]
  std::vector<Matching> missing_matchings;
  std::vector<Matching> refined_matchings;
  bool converged = true;
};

BatchLoss batch_joint_loss(const nn::Tensor& missing_pred, const std::vector<PointCloud>& missing_gt,
                           const nn::Tensor& refined, const std::vector<PointCloud>& complete_gt,
                           const LossOptions& options = {});

/// Loss of the same batch under fixed matchings (for finite-difference checks).
double fixed_matching_loss(const nn::Tensor& missing_pred, const std::vector<PointCloud>& missing_gt,
                           const nn::Tensor& refined, const std::vector<PointCloud>& complete_gt,
                           const std::vector<Matching>& missing_matchings,
                           const std::vector<Matching>& refined_matchings);

}  // namespace pcc
