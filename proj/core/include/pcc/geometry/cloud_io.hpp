#pragma once

#include "pcc/geometry/point_cloud.hpp"

#include <filesystem>

namespace pcc {

// File formats, chosen by extension:
//   .xyz / .txt  text, one "x y z" (or "x y z label") per line
//   .bin         little-endian: u64 point count, then f32 triples (or quadruples with label)

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud);
void save_labeled_cloud(const std::filesystem::path& path, const LabeledCloud& cloud);

PointCloud load_cloud(const std::filesystem::path& path);
LabeledCloud load_labeled_cloud(const std::filesystem::path& path);

}  // namespace pcc
