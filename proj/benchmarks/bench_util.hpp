#pragma once

#include "pcc/geometry/point_cloud.hpp"
#include "pcc/random.hpp"

#include <random>

namespace pcc::bench {

inline PointCloud random_cloud(std::size_t n, Seed seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  PointCloud c;
  c.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.points.emplace_back(u(rng), u(rng), u(rng));
  return c;
}

}  // namespace pcc::bench
