#pragma once

#include "pcc/geometry/point_cloud.hpp"

namespace pcc {

/// Mean squared nearest-neighbour distances in both directions. chamfer is their sum.
struct DirectionalErrors {
  double pred_to_gt = 0.0;
  double gt_to_pred = 0.0;
  double chamfer = 0.0;
};

/// Multiplier applied to every reported metric value (tables and CSV output).
inline constexpr double kMetricReportScale = 10000.0;

DirectionalErrors directional_errors(const PointCloud& pred, const PointCloud& gt);

/// Mean over `from` of the squared distance to the nearest point of `to`.
double mean_nearest_squared_distance(const PointCloud& from, const PointCloud& to);

DirectionalErrors scaled_for_report(const DirectionalErrors& e);

}  // namespace pcc
