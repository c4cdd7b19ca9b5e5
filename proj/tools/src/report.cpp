#include "pcc/cli/report.hpp"

#include "pcc/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace pcc::cli {
namespace {

constexpr const char* kScaleNote =
    "# squared-distance errors scaled by 10000; pred_to_gt is the first value";

std::string fixed(double v) { return fmt::format("{:.6f}", v); }

}  // namespace

std::string format_metrics_csv(const std::vector<CategoryMetrics>& rows) {
  std::string out = std::string(kScaleNote) + "\ncategory,pred_to_gt,gt_to_pred,chamfer\n";
  for (const auto& row : rows) {
    const DirectionalErrors e = scaled_for_report(row.errors);
    out += fmt::format("{},{},{},{}\n", row.category, fixed(e.pred_to_gt), fixed(e.gt_to_pred),
                       fixed(e.chamfer));
  }
  return out;
}

std::string format_robustness_csv(const std::vector<RobustnessRow>& rows) {
  std::string out = "# mean chamfer of the refined output scaled by 10000\nradius,mean_chamfer\n";
  for (const auto& row : rows) out += fmt::format("{},{}\n", row.radius, fixed(row.mean_chamfer));
  return out;
}

std::string format_ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = std::string(kScaleNote) +
                    "; unrefined is the merged cloud (mu = 0)\n"
                    "category,refined_pred_to_gt,refined_gt_to_pred,refined_chamfer,"
                    "unrefined_pred_to_gt,unrefined_gt_to_pred,unrefined_chamfer\n";
  for (const auto& row : rows) {
    const DirectionalErrors r = scaled_for_report(row.refined);
    const DirectionalErrors u = scaled_for_report(row.unrefined);
    out += fmt::format("{},{},{},{},{},{},{}\n", row.category, fixed(r.pred_to_gt),
                       fixed(r.gt_to_pred), fixed(r.chamfer), fixed(u.pred_to_gt),
                       fixed(u.gt_to_pred), fixed(u.chamfer));
  }
  return out;
}

std::string format_robustness_svg(const std::vector<RobustnessRow>& rows) {
  constexpr double kWidth = 480, kHeight = 320, kLeft = 70, kRight = 20, kTop = 30, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  if (!rows.empty()) {
    x_lo = rows.front().radius;
    x_hi = rows.back().radius;
    y_hi = 0.0;
    for (const auto& r : rows) y_hi = std::max(y_hi, r.mean_chamfer);
    if (y_hi <= 0.0) y_hi = 1.0;
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
  }
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h; };

  std::string s = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" "
      "font-family=\"sans-serif\" font-size=\"11\">\n",
      kWidth, kHeight);
  s += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  s += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n",
      kLeft, kTop + plot_h, kLeft + plot_w, kTop);
  for (const auto& r : rows) {
    s += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>"
        "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
        px(r.radius), kTop + plot_h, kTop + plot_h + 4, kTop + plot_h + 16, r.radius);
  }
  for (int t = 0; t <= 4; ++t) {
    const double y = y_lo + (y_hi - y_lo) * t / 4.0;
    s += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
        "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:.2f}</text>\n",
        kLeft - 4, py(y), kLeft, kLeft - 6, py(y) + 4, y);
  }
  s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">radius</text>\n",
                   kLeft + plot_w / 2, kHeight - 10);
  s += fmt::format(
      "<text x=\"14\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 14 {0})\">"
      "mean chamfer (x10000)</text>\n",
      kTop + plot_h / 2);
  std::string points;
  for (const auto& r : rows) {
    if (!points.empty()) points += ' ';
    points += fmt::format("{:.2f},{:.2f}", px(r.radius), py(r.mean_chamfer));
  }
  s += fmt::format("<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n",
                   points);
  s += "</svg>\n";
  return s;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace pcc::cli
