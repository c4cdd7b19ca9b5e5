#include "pcc/training/toy_shapes.hpp"

#include "pcc/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace pcc {
namespace {

constexpr double kPi = std::numbers::pi;

Vec3 sphere_point(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    Vec3 v(g(rng), g(rng), g(rng));
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Vec3 box_point(const Vec3& h, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double areas[3] = {h.y() * h.z(), h.x() * h.z(), h.x() * h.y()};
  std::discrete_distribution<int> face({areas[0], areas[1], areas[2]});
  const int axis = face(rng);
  Vec3 p(u(rng) * h.x(), u(rng) * h.y(), u(rng) * h.z());
  p[axis] = (u(rng) < 0.0 ? -1.0 : 1.0) * h[axis];
  return p;
}

Vec3 cylinder_point(double radius, double half_height, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double side = 2.0 * kPi * radius * 2.0 * half_height;
  const double caps = 2.0 * kPi * radius * radius;
  const double theta = 2.0 * kPi * u(rng);
  if (u(rng) * (side + caps) < side) {
    return {radius * std::cos(theta), radius * std::sin(theta), half_height * (2.0 * u(rng) - 1.0)};
  }
  const double r = radius * std::sqrt(u(rng));
  const double z = u(rng) < 0.5 ? -half_height : half_height;
  return {r * std::cos(theta), r * std::sin(theta), z};
}

Vec3 torus_point(double major, double minor, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double theta = 2.0 * kPi * u(rng);
  double phi = 0.0;
  while (true) {
    phi = 2.0 * kPi * u(rng);
    if (u(rng) * (major + minor) <= major + minor * std::cos(phi)) break;
  }
  const double ring = major + minor * std::cos(phi);
  return {ring * std::cos(theta), ring * std::sin(theta), minor * std::sin(phi)};
}

}  // namespace

std::string_view to_string(ToyShape shape) {
  switch (shape) {
    case ToyShape::kSphere: return "sphere";
    case ToyShape::kBox: return "box";
    case ToyShape::kCylinder: return "cylinder";
    case ToyShape::kTorus: return "torus";
  }
  return "unknown";
}

PointCloud sample_toy_shape(ToyShape shape, std::size_t n_points, Seed seed) {
  if (n_points == 0 || n_points % 2 != 0) {
    throw InvalidArgument("toy shapes need an even, positive point count");
  }
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> prop(0.0, 1.0);
  const Vec3 half_extents(0.4 + 0.6 * prop(rng), 0.4 + 0.6 * prop(rng), 0.4 + 0.6 * prop(rng));
  const double cyl_radius = 0.3 + 0.7 * prop(rng);
  const double cyl_half_height = 0.3 + 0.7 * prop(rng);
  const double torus_minor = 0.2 + 0.3 * prop(rng);

  std::vector<Vec3> pts;
  pts.reserve(n_points);
  for (std::size_t i = 0; i < n_points / 2; ++i) {
    Vec3 p;
    switch (shape) {
      case ToyShape::kSphere: p = sphere_point(rng); break;
      case ToyShape::kBox: p = box_point(half_extents, rng); break;
      case ToyShape::kCylinder: p = cylinder_point(cyl_radius, cyl_half_height, rng); break;
      case ToyShape::kTorus: p = torus_point(1.0, torus_minor, rng); break;
    }
    pts.push_back(p);
    pts.push_back(-p);
  }
  return normalize_cloud(PointCloud(std::move(pts)));
}

Dataset generate_toy_dataset(std::size_t n_shapes, Seed seed, std::size_t n_points) {
  if (n_shapes < 1) throw InvalidArgument("n_shapes must be >= 1");
  constexpr ToyShape kCycle[] = {ToyShape::kSphere, ToyShape::kBox, ToyShape::kCylinder,
                                 ToyShape::kTorus};
  Dataset ds;
  ds.shapes.reserve(n_shapes);
  for (std::size_t i = 0; i < n_shapes; ++i) {
    const ToyShape shape = kCycle[i % 4];
    ShapeEntry e;
    e.category = std::string(to_string(shape));
    e.id = fmt::format("{}_{:03}", e.category, i);
    e.split = i % 5 == 4 ? Split::kTest : Split::kTrain;
    e.cloud = sample_toy_shape(shape, n_points, derive_seed(seed, {i}));
    ds.shapes.push_back(std::move(e));
  }
  return ds;
}

}  // namespace pcc
