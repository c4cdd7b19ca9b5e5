#pragma once

#include "pcc/metrics/chamfer.hpp"
#include "pcc/training/evaluation.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pcc::cli {

struct RobustnessRow {
  double radius = 0.0;
  double mean_chamfer = 0.0;  // scaled by kMetricReportScale
};

struct AblationRow {
  std::string category;
  DirectionalErrors refined;    // unscaled
  DirectionalErrors unrefined;  // unscaled
};

/// Header comment, `category,pred_to_gt,gt_to_pred,chamfer`, one row per category.
std::string format_metrics_csv(const std::vector<CategoryMetrics>& rows);
std::string format_robustness_csv(const std::vector<RobustnessRow>& rows);
std::string format_ablation_csv(const std::vector<AblationRow>& rows);

/// Axes, tick labels and one polyline of mean chamfer over radius.
std::string format_robustness_svg(const std::vector<RobustnessRow>& rows);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pcc::cli
