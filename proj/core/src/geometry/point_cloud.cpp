#include "pcc/geometry/point_cloud.hpp"

#include "pcc/error.hpp"

#include <cmath>

namespace pcc {

void LabeledCloud::validate() const {
  if (labels.size() != points.size()) {
    throw ShapeError("labeled cloud has " + std::to_string(points.size()) + " points but " +
                     std::to_string(labels.size()) + " labels");
  }
  for (auto l : labels) {
    if (l > 1) throw ShapeError("label outside {0,1}");
  }
}

bool all_finite(const PointCloud& cloud) {
  for (const auto& p : cloud.points) {
    if (!p.allFinite()) return false;
  }
  return true;
}

Vec3 centroid(const PointCloud& cloud) {
  Vec3 sum = Vec3::Zero();
  for (const auto& p : cloud.points) sum += p;
  return cloud.empty() ? sum : Vec3(sum / static_cast<double>(cloud.size()));
}

double max_norm(const PointCloud& cloud) {
  double m = 0.0;
  for (const auto& p : cloud.points) m = std::max(m, p.norm());
  return m;
}

PointCloud normalize_cloud(const PointCloud& cloud) {
  if (cloud.empty()) throw InvalidArgument("cannot normalize an empty cloud");
  const Vec3 c = centroid(cloud);
  PointCloud out = cloud;
  for (auto& p : out.points) p -= c;
  const double scale = max_norm(out);
  if (!(scale > 1e-12)) throw InvalidArgument("cannot normalize a degenerate cloud");
  for (auto& p : out.points) p /= scale;
  return out;
}

PointCloud gather(const PointCloud& cloud, const std::vector<std::size_t>& indices) {
  PointCloud out;
  out.points.reserve(indices.size());
  for (auto i : indices) out.points.push_back(cloud.points.at(i));
  return out;
}

}  // namespace pcc
