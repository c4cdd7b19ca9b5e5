#pragma once

#include "pcc/geometry/point_cloud.hpp"
#include "pcc/random.hpp"

#include <cstddef>

namespace pcc {

struct SplitResult {
  PointCloud inside;
  PointCloud outside;
};

/// inside = {p : |p - center| <= radius}; everything else is outside.
SplitResult sphere_split(const PointCloud& cloud, const Vec3& center, double radius);

struct SampleSizes {
  std::size_t complete = 2048;
  std::size_t partial = 2048;
  std::size_t missing = 1024;
};

/// Complete / partial / missing triple generated by removing a sphere around a surface point.
struct ShapeSample {
  PointCloud complete;
  PointCloud partial;
  PointCloud missing;
  double radius = 0.0;
  Vec3 center = Vec3::Zero();
};

inline constexpr int kMaxSplitAttempts = 16;

/// Picks a uniformly random cloud point as the sphere center, splits, and resamples each side
/// to its target size. Re-draws the center when a side comes out empty (bounded attempts).
ShapeSample make_sample(const PointCloud& cloud, double radius, Seed seed,
                        const SampleSizes& sizes = {});

}  // namespace pcc
