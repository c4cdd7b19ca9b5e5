#include "pcc/geometry/mesh.hpp"

#include "pcc/error.hpp"


#include <algorithm>
#include <random>

namespace pcc {

void TriangleMesh::validate() const {
  for (const auto& v : vertices) {
    if (!v.allFinite()) throw InvalidArgument("mesh has a non-finite vertex");
  }
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (auto idx : faces[f]) {
      if (idx >= vertices.size()) {
        throw InvalidArgument("face " + std::to_string(f) + " references vertex " +
                              std::to_string(idx) + " of " + std::to_string(vertices.size()));
      }
    }
  }
}

double TriangleMesh::face_area(std::size_t f) const {
  const auto& t = faces[f];
  const Vec3& a = vertices[t[0]];
  const Vec3& b = vertices[t[1]];
  const Vec3& c = vertices[t[2]];
  return 0.5 * (b - a).cross(c - a).norm();
}

double TriangleMesh::total_area() const {
  double area = 0.0;
  for (std::size_t f = 0; f < faces.size(); ++f) area += face_area(f);
  return area;
}

TriangleMesh normalize(const TriangleMesh& mesh) {
  if (mesh.vertices.empty()) throw InvalidArgument("cannot normalize a mesh without vertices");
  Vec3 c = Vec3::Zero();
  for (const auto& v : mesh.vertices) c += v;
  c /= static_cast<double>(mesh.vertices.size());

  TriangleMesh out = mesh;
  double scale = 0.0;
  for (auto& v : out.vertices) {
    v -= c;
    scale = std::max(scale, v.norm());
  }
  if (!(scale > 1e-12)) throw InvalidArgument("degenerate mesh: all vertices coincide");
  for (auto& v : out.vertices) v /= scale;
  return out;
}

PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, Seed seed) {
  if (n == 0) throw InvalidArgument("sample_surface needs n >= 1");
  mesh.validate();

  std::vector<double> cumulative(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    total += mesh.face_area(f);
    cumulative[f] = total;
  }
  if (!(total > 0.0)) throw InvalidArgument("mesh has zero surface area");

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = unit(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    std::size_t f = static_cast<std::size_t>(it - cumulative.begin());
    if (f == cumulative.size()) {
      // r rounded up to the total; take the last face with positive area
      f = static_cast<std::size_t>(
          std::lower_bound(cumulative.begin(), cumulative.end(), total) - cumulative.begin());
    }

    double u = unit(rng);
    double v = unit(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    const auto& t = mesh.faces[f];
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    cloud.points.emplace_back(a + u * (b - a) + v * (c - a));
  }
  return cloud;
}

}  // namespace pcc
