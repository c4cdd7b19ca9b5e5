#include "pcc/metrics/chamfer.hpp"

#include "pcc/error.hpp"
#include "pcc/metrics/kd_tree.hpp"

namespace pcc {

double mean_nearest_squared_distance(const PointCloud& from, const PointCloud& to) {
  if (from.empty() || to.empty()) throw InvalidArgument("nearest-neighbour error on an empty cloud");
  const KdTree tree(to);
  double sum = 0.0;
  for (const auto& p : from.points) sum += tree.nearest(p).squared_distance;
  return sum / static_cast<double>(from.size());
}

DirectionalErrors directional_errors(const PointCloud& pred, const PointCloud& gt) {
  DirectionalErrors e;
  e.pred_to_gt = mean_nearest_squared_distance(pred, gt);
  e.gt_to_pred = mean_nearest_squared_distance(gt, pred);
  e.chamfer = e.pred_to_gt + e.gt_to_pred;
  return e;
}

DirectionalErrors scaled_for_report(const DirectionalErrors& e) {
  DirectionalErrors s;
  s.pred_to_gt = e.pred_to_gt * kMetricReportScale;
  s.gt_to_pred = e.gt_to_pred * kMetricReportScale;
  s.chamfer = s.pred_to_gt + s.gt_to_pred;
  return s;
}

}  // namespace pcc
