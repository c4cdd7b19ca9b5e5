#pragma once

#include "pcc/geometry/mesh.hpp"

#include <filesystem>
#include <istream>

namespace pcc {

/// Loads an OFF or OBJ mesh (positions and faces only). Polygons are fan-triangulated.
/// Dispatches on the file extension; throws UnsupportedFormatError otherwise.
TriangleMesh load_mesh(const std::filesystem::path& path);

TriangleMesh parse_off(std::istream& in);
TriangleMesh parse_obj(std::istream& in);

void save_off(const std::filesystem::path& path, const TriangleMesh& mesh);

}  // namespace pcc
