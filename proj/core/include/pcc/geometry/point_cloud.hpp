#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pcc {

using Vec3 = Eigen::Vector3d;

/// Ordered 3D point set in normalized shape space.
struct PointCloud {
  std::vector<Vec3> points;

  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> pts) : points(std::move(pts)) {}

  std::size_t size() const noexcept { return points.size(); }
  bool empty() const noexcept { return points.empty(); }
  const Vec3& operator[](std::size_t i) const { return points[i]; }
  Vec3& operator[](std::size_t i) { return points[i]; }

  friend bool operator==(const PointCloud& a, const PointCloud& b) { return a.points == b.points; }
};

/// Points tagged with their origin: 0 = observed partial input, 1 = predicted missing part.
struct LabeledCloud {
  PointCloud points;
  std::vector<std::uint8_t> labels;

  std::size_t size() const noexcept { return points.size(); }
  /// Throws ShapeError when labels and points disagree in length or a label is not 0/1.
  void validate() const;
};

bool all_finite(const PointCloud& cloud);
Vec3 centroid(const PointCloud& cloud);
double max_norm(const PointCloud& cloud);

/// Translates the centroid to the origin and scales so the farthest point has norm 1.
/// Throws InvalidArgument for empty or single-location clouds.
PointCloud normalize_cloud(const PointCloud& cloud);

PointCloud gather(const PointCloud& cloud, const std::vector<std::size_t>& indices);

}  // namespace pcc
