#pragma once

#include "pcc/geometry/point_cloud.hpp"
#include "pcc/random.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace pcc {

/// Subset of a cloud together with the source index of every selected point.
struct Subsample {
  PointCloud points;
  std::vector<std::size_t> indices;
};

enum class SamplingMethod { kFarthestPoint, kMinimumDensity };

SamplingMethod parse_sampling_method(std::string_view name);
std::string_view to_string(SamplingMethod method);

inline constexpr double kDefaultDensitySigma = 0.05;

/// Iterative farthest point sampling. The first point is a seeded uniform draw; every
/// following point maximizes its distance to the selected set (lowest index on ties).
Subsample farthest_point_sample(const PointCloud& cloud, std::size_t k, Seed seed);
Subsample farthest_point_sample_from(const PointCloud& cloud, std::size_t k, std::size_t first);

/// Greedy minimum density sampling with a Gaussian kernel of width `sigma`.
Subsample minimum_density_sample(const PointCloud& cloud, std::size_t k, double sigma, Seed seed);
Subsample minimum_density_sample_from(const PointCloud& cloud, std::size_t k, double sigma,
                                      std::size_t first);

/// Uniform resampling to exactly k points: without replacement when the cloud has at least
/// k points, otherwise every point once plus uniform draws with replacement.
Subsample resample_uniform(const PointCloud& cloud, std::size_t k, Rng& rng);

/// Result of concatenating partial + predicted points and subsampling the union.
struct MergeResult {
  LabeledCloud merged;
  /// Indices into the concatenation; values >= partial_size refer to predicted points.
  std::vector<std::size_t> source_indices;
  std::size_t partial_size = 0;
};

MergeResult merge_and_sample(const PointCloud& partial, const PointCloud& predicted, std::size_t n,
                             SamplingMethod method, Seed seed,
                             double sigma = kDefaultDensitySigma);

}  // namespace pcc
