#include "pcc/training/dataset.hpp"

#include "../common/parse_util.hpp"
#include "pcc/error.hpp"
#include "pcc/geometry/cloud_io.hpp"
#include "pcc/geometry/mesh.hpp"
#include "pcc/geometry/mesh_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace fs = std::filesystem;

namespace pcc {

using detail::trim;

namespace {

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string lower_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

Split parse_split(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "test") return Split::kTest;
  throw InvalidArgument("unknown split '" + std::string(name) + "' (expected train|test)");
}

std::string_view to_string(Split split) { return split == Split::kTrain ? "train" : "test"; }

std::vector<std::size_t> Dataset::indices(Split split) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    if (shapes[i].split == split) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Dataset::all_indices() const {
  std::vector<std::size_t> out(shapes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

std::vector<ManifestRow> read_manifest(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw Error("cannot open manifest " + manifest.string());
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    auto fields = split_csv(view);
    if (fields.size() != 3) throw ParseError("manifest rows need path,category,split", line_no);
    if (rows.empty() && fields[0] == "path") continue;
    try {
      rows.push_back({fields[0], fields[1], parse_split(fields[2])});
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return rows;
}

PointCloud sample_mesh_file(const fs::path& mesh_path, std::size_t n_points, Seed seed) {
  return sample_surface(normalize(load_mesh(mesh_path)), n_points, seed);
}

Dataset load_dataset(const fs::path& dir_or_manifest, std::size_t n_points, Seed seed) {
  const fs::path manifest =
      fs::is_directory(dir_or_manifest) ? dir_or_manifest / "manifest.csv" : dir_or_manifest;
  const fs::path base = manifest.parent_path();
  const auto rows = read_manifest(manifest);
  Dataset ds;
  ds.shapes.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const fs::path p = base / rows[i].path;
    const auto ext = lower_extension(p);
    ShapeEntry entry;
    entry.id = p.stem().string();
    entry.category = rows[i].category;
    entry.split = rows[i].split;
    if (ext == ".off" || ext == ".obj") {
      entry.cloud = sample_mesh_file(p, n_points, derive_seed(seed, {i}));
    } else {
      entry.cloud = load_cloud(p);
    }
    ds.shapes.push_back(std::move(entry));
  }
  if (ds.shapes.empty()) throw Error("dataset " + manifest.string() + " is empty");
  return ds;
}

void save_dataset(const Dataset& dataset, const fs::path& dir) {
  fs::create_directories(dir / "clouds");
  std::ofstream manifest(dir / "manifest.csv");
  if (!manifest) throw Error("cannot write " + (dir / "manifest.csv").string());
  manifest << "path,category,split\n";
  for (std::size_t i = 0; i < dataset.shapes.size(); ++i) {
    const auto& s = dataset.shapes[i];
    const std::string rel = fmt::format("clouds/{:05}_{}.bin", i, s.id);
    save_cloud(dir / rel, s.cloud);
    manifest << rel << ',' << s.category << ',' << to_string(s.split) << '\n';
  }
}

}  // namespace pcc
