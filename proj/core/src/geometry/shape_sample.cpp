#include "pcc/geometry/shape_sample.hpp"

#include "pcc/error.hpp"
#include "pcc/geometry/sampling.hpp"

#include <random>

namespace pcc {

SplitResult sphere_split(const PointCloud& cloud, const Vec3& center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("split radius must be positive");
  SplitResult out;
  for (const auto& p : cloud.points) {
    if ((p - center).norm() <= radius) {
      out.inside.points.push_back(p);
    } else {
      out.outside.points.push_back(p);
    }
  }
  return out;
}

ShapeSample make_sample(const PointCloud& cloud, double radius, Seed seed,
                        const SampleSizes& sizes) {
  if (cloud.empty()) throw InvalidArgument("make_sample needs a non-empty cloud");
  if (!(radius > 0.0 && radius < 1.0)) throw InvalidArgument("radius must lie in (0, 1)");

  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick_center(0, cloud.size() - 1);
  for (int attempt = 0; attempt < kMaxSplitAttempts; ++attempt) {
    const Vec3 center = cloud[pick_center(rng)];
    SplitResult split = sphere_split(cloud, center, radius);
    if (split.inside.empty() || split.outside.empty()) continue;

    ShapeSample sample;
    sample.radius = radius;
    sample.center = center;
    sample.complete = resample_uniform(cloud, sizes.complete, rng).points;
    sample.partial = resample_uniform(split.outside, sizes.partial, rng).points;
    sample.missing = resample_uniform(split.inside, sizes.missing, rng).points;
    return sample;
  }
  throw Error("make_sample: no sphere split with both sides non-empty after " +
              std::to_string(kMaxSplitAttempts) + " attempts");
}

}  // namespace pcc
