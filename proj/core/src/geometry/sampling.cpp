#include "pcc/geometry/sampling.hpp"

#include "pcc/error.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace pcc {
namespace {

void check_count(const PointCloud& cloud, std::size_t k) {
  if (k == 0) throw InvalidArgument("subsample size must be at least 1");
  if (k > cloud.size()) {
    throw InvalidArgument("cannot select " + std::to_string(k) + " points from a cloud of " +
                          std::to_string(cloud.size()));
  }
}

std::size_t seeded_first(std::size_t n, Seed seed) {
  Rng rng(seed);
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

Subsample finish(const PointCloud& cloud, std::vector<std::size_t> indices) {
  Subsample out;
  out.points = gather(cloud, indices);
  out.indices = std::move(indices);
  return out;
}

}  // namespace

SamplingMethod parse_sampling_method(std::string_view name) {
  if (name == "ifps" || name == "fps") return SamplingMethod::kFarthestPoint;
  if (name == "mds") return SamplingMethod::kMinimumDensity;
  throw InvalidArgument("unknown sampling method '" + std::string(name) + "' (expected ifps|mds)");
}

std::string_view to_string(SamplingMethod method) {
  return method == SamplingMethod::kFarthestPoint ? "ifps" : "mds";
}

Subsample farthest_point_sample(const PointCloud& cloud, std::size_t k, Seed seed) {
  check_count(cloud, k);
  return farthest_point_sample_from(cloud, k, seeded_first(cloud.size(), seed));
}

Subsample farthest_point_sample_from(const PointCloud& cloud, std::size_t k, std::size_t first) {
  check_count(cloud, k);
  const std::size_t n = cloud.size();
  if (first >= n) throw InvalidArgument("first index out of range");

  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::vector<char> selected(n, 0);
  std::vector<std::size_t> indices;
  indices.reserve(k);

  std::size_t current = first;
  for (std::size_t step = 0; step < k; ++step) {
    indices.push_back(current);
    selected[current] = 1;
    const Vec3 c = cloud[current];
    std::size_t best = n;
    double best_d2 = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d2 = (cloud[i] - c).squaredNorm();
      if (d2 < min_d2[i]) min_d2[i] = d2;
      if (!selected[i] && min_d2[i] > best_d2) {
        best_d2 = min_d2[i];
        best = i;
      }
    }
    current = best;
  }
  return finish(cloud, std::move(indices));
}

Subsample minimum_density_sample(const PointCloud& cloud, std::size_t k, double sigma, Seed seed) {
  check_count(cloud, k);
  return minimum_density_sample_from(cloud, k, sigma, seeded_first(cloud.size(), seed));
}

Subsample minimum_density_sample_from(const PointCloud& cloud, std::size_t k, double sigma,
                                      std::size_t first) {
  check_count(cloud, k);
  if (!(sigma > 0.0)) throw InvalidArgument("density kernel width must be positive");
  const std::size_t n = cloud.size();
  if (first >= n) throw InvalidArgument("first index out of range");

  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> density(n, 0.0);
  std::vector<char> selected(n, 0);
  std::vector<std::size_t> indices;
  indices.reserve(k);

  std::size_t current = first;
  for (std::size_t step = 0; step < k; ++step) {
    indices.push_back(current);
    selected[current] = 1;
    const Vec3 c = cloud[current];
    std::size_t best = n;
    double best_density = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      density[i] += std::exp(-(cloud[i] - c).squaredNorm() * inv_two_sigma2);
      if (!selected[i] && density[i] < best_density) {
        best_density = density[i];
        best = i;
      }
    }
    current = best;
  }
  return finish(cloud, std::move(indices));
}

Subsample resample_uniform(const PointCloud& cloud, std::size_t k, Rng& rng) {
  if (cloud.empty()) throw InvalidArgument("cannot resample an empty cloud");
  const std::size_t n = cloud.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::size_t> indices;
  indices.reserve(k);
  if (n >= k) {
    // partial Fisher-Yates
    for (std::size_t i = 0; i < k; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, n - 1);
      std::swap(order[i], order[pick(rng)]);
      indices.push_back(order[i]);
    }
  } else {
    indices = order;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    while (indices.size() < k) indices.push_back(pick(rng));
    std::shuffle(indices.begin(), indices.end(), rng);
  }
  return finish(cloud, std::move(indices));
}

MergeResult merge_and_sample(const PointCloud& partial, const PointCloud& predicted, std::size_t n,
                             SamplingMethod method, Seed seed, double sigma) {
  const std::size_t total = partial.size() + predicted.size();
  if (n > total) {
    throw InvalidArgument("merge_and_sample: requested " + std::to_string(n) +
                          " points from a union of " + std::to_string(total));
  }
  PointCloud merged;
  merged.points.reserve(total);
  merged.points.insert(merged.points.end(), partial.points.begin(), partial.points.end());
  merged.points.insert(merged.points.end(), predicted.points.begin(), predicted.points.end());

  Subsample picked = method == SamplingMethod::kFarthestPoint
                         ? farthest_point_sample(merged, n, seed)
                         : minimum_density_sample(merged, n, sigma, seed);

  MergeResult result;
  result.partial_size = partial.size();
  result.merged.points = std::move(picked.points);
  result.merged.labels.reserve(n);
  for (auto idx : picked.indices) {
    result.merged.labels.push_back(idx >= partial.size() ? 1 : 0);
  }
  result.source_indices = std::move(picked.indices);
  return result;
}

}  // namespace pcc
