#pragma once

#include "pcc/geometry/point_cloud.hpp"
#include "pcc/random.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace pcc {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> faces;

  /// Throws InvalidArgument if a face references a vertex out of range or a vertex is non-finite.
  void validate() const;
  double face_area(std::size_t f) const;
  double total_area() const;
};

/// Centers the vertex centroid at the origin and scales uniformly so the max vertex norm is 1.
TriangleMesh normalize(const TriangleMesh& mesh);

/// Area-weighted uniform surface sampling. Zero-area faces never receive samples.
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, Seed seed);

}  // namespace pcc
