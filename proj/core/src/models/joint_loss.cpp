#include "pcc/models/joint_loss.hpp"

#include "pcc/error.hpp"
#include "pcc/models/completion_model.hpp"

namespace pcc {
namespace {

void add_gradient(nn::Tensor& grad, std::size_t b, const std::vector<Vec3>& g, double scale) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t d = 0; d < 3; ++d) {
      grad.at(b, d, i) += static_cast<nn::Real>(g[i][static_cast<Eigen::Index>(d)] * scale);
    }
  }
}

}  // namespace

Matching solve_emd(const PointCloud& a, const PointCloud& b, const LossOptions& options) {
  return options.solver == EmdSolver::kExact ? emd_exact(a, b) : emd_approx(a, b, options.auction);
}

JointLoss joint_loss(const PointCloud& missing_pred, const PointCloud& missing_gt,
                     const PointCloud& refined, const PointCloud& complete_gt,
                     const LossOptions& options) {
  if (missing_pred.size() != missing_gt.size() || refined.size() != complete_gt.size()) {
    throw ShapeError("joint loss: predicted and ground-truth sizes differ");
  }
  JointLoss loss;
  loss.missing = solve_emd(missing_pred, missing_gt, options).cost;
  loss.refined = solve_emd(refined, complete_gt, options).cost;
  loss.total = loss.missing + loss.refined;
  return loss;
}

BatchLoss batch_joint_loss(const nn::Tensor& missing_pred, const std::vector<PointCloud>& missing_gt,
                           const nn::Tensor& refined, const std::vector<PointCloud>& complete_gt,
                           const LossOptions& options) {
  const std::size_t batch = missing_pred.dim(0);
  if (missing_gt.size() != batch || complete_gt.size() != batch || refined.dim(0) != batch) {
    throw ShapeError("joint loss: batch sizes differ");
  }
  BatchLoss out;
  out.grad_missing = nn::Tensor(missing_pred.shape());
  out.grad_refined = nn::Tensor(refined.shape());
  const double inv_b = 1.0 / static_cast<double>(batch);
  double missing_sum = 0.0, refined_sum = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    const PointCloud pred = cloud_from_tensor(missing_pred, b);
    const PointCloud ref = cloud_from_tensor(refined, b);
    if (pred.size() != missing_gt[b].size() || ref.size() != complete_gt[b].size()) {
      throw ShapeError("joint loss: predicted and ground-truth sizes differ");
    }
    Matching mm = solve_emd(pred, missing_gt[b], options);
    Matching rm = solve_emd(ref, complete_gt[b], options);
    missing_sum += mm.cost;
    refined_sum += rm.cost;
    add_gradient(out.grad_missing, b, emd_gradient(pred, missing_gt[b], mm), inv_b);
    add_gradient(out.grad_refined, b, emd_gradient(ref, complete_gt[b], rm), inv_b);
    out.converged = out.converged && mm.converged && rm.converged;
    out.missing_matchings.push_back(std::move(mm));
    out.refined_matchings.push_back(std::move(rm));
  }
  out.loss.missing = missing_sum * inv_b;
  out.loss.refined = refined_sum * inv_b;
  out.loss.total = out.loss.missing + out.loss.refined;
  return out;
}

double fixed_matching_loss(const nn::Tensor& missing_pred, const std::vector<PointCloud>& missing_gt,
                           const nn::Tensor& refined, const std::vector<PointCloud>& complete_gt,
                           const std::vector<Matching>& missing_matchings,
                           const std::vector<Matching>& refined_matchings) {
  const std::size_t batch = missing_pred.dim(0);
  double sum = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    sum += matching_cost(cloud_from_tensor(missing_pred, b), missing_gt[b],
                         missing_matchings[b].assignment);
    sum += matching_cost(cloud_from_tensor(refined, b), complete_gt[b],
                         refined_matchings[b].assignment);
  }
  return sum / static_cast<double>(batch);
}

}  // namespace pcc
