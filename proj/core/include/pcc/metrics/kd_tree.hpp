#pragma once

#include "pcc/geometry/point_cloud.hpp"

#include <cstddef>
#include <vector>

namespace pcc {

/// Exact nearest-neighbour queries over a fixed 3D point set.
class KdTree {
 public:
  explicit KdTree(const PointCloud& cloud);

  struct Hit {
    std::size_t index;
    double squared_distance;
  };

  /// Ties resolve to the lowest point index.
  Hit nearest(const Vec3& query) const;

 private:
  struct Node {
    std::size_t begin, end;  // range in order_
    int axis;                // -1 for leaves
    double split;
    std::size_t left, right;
  };

  std::size_t build(std::size_t begin, std::size_t end, int depth);
  void search(std::size_t node, const Vec3& q, Hit& best) const;

  const PointCloud* cloud_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

}  // namespace pcc
