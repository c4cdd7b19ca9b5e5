#pragma once

#include "pcc/geometry/point_cloud.hpp"
#include "pcc/random.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pcc {

enum class Split { kTrain, kTest };

Split parse_split(std::string_view name);
std::string_view to_string(Split split);

struct ShapeEntry {
  std::string id;
  std::string category;
  Split split = Split::kTrain;
  PointCloud cloud;  // normalized, typically 8192 points
};

struct Dataset {
  std::vector<ShapeEntry> shapes;

  std::vector<std::size_t> indices(Split split) const;
  std::vector<std::size_t> all_indices() const;
};

inline constexpr std::size_t kShapePoints = 8192;

/// Manifest row: `path, category, split`. Paths are relative to the manifest directory.
struct ManifestRow {
  std::string path;
  std::string category;
  Split split = Split::kTrain;
};

std::vector<ManifestRow> read_manifest(const std::filesystem::path& manifest);

/// Loads a dataset directory (or manifest file). Mesh rows (.off/.obj) are normalized and
/// surface-sampled with a per-row seed; cloud rows (.bin/.xyz) are read as stored.
Dataset load_dataset(const std::filesystem::path& dir_or_manifest, std::size_t n_points = kShapePoints,
                     Seed seed = 0);

/// Writes `clouds/<index>.bin` for every shape plus `manifest.csv`.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Mesh -> normalize -> surface sample.
PointCloud sample_mesh_file(const std::filesystem::path& mesh_path, std::size_t n_points, Seed seed);

}  // namespace pcc
