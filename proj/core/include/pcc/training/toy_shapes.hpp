#pragma once

#include "pcc/training/dataset.hpp"

#include <string_view>

namespace pcc {

enum class ToyShape { kSphere, kBox, kCylinder, kTorus };

std::string_view to_string(ToyShape shape);

/// Area-uniform samples of an analytic, origin-symmetric surface. Points come in antipodal
/// pairs, so the centroid is the origin; the cloud is then scaled to max norm 1.
/// n_points must be even.
PointCloud sample_toy_shape(ToyShape shape, std::size_t n_points, Seed seed);

/// Shapes cycle sphere, box, cylinder, torus with seeded random proportions. Every fifth shape
/// (index % 5 == 4) goes to the test split.
Dataset generate_toy_dataset(std::size_t n_shapes, Seed seed, std::size_t n_points = kShapePoints);

}  // namespace pcc
