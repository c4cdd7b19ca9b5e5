#include "pcc/geometry/mesh_io.hpp"

#include "pcc/error.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pcc {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

double to_double(std::string_view tok, std::size_t line) {
  // from_chars for double is available in libstdc++ 11
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("expected a number, got '" + std::string(tok) + "'", line);
  }
  return value;
}

long long to_integer(std::string_view tok, std::size_t line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("expected an integer, got '" + std::string(tok) + "'", line);
  }
  return value;
}

std::string_view strip_comment(std::string_view line) {
  auto pos = line.find('#');
  return pos == std::string_view::npos ? line : line.substr(0, pos);
}

// Reads the next line that has any content after comment stripping.
bool next_content_line(std::istream& in, std::string& buffer, std::size_t& line_no,
                       std::vector<std::string_view>& tokens) {
  while (std::getline(in, buffer)) {
    ++line_no;
    tokens = split_ws(strip_comment(buffer));
    if (!tokens.empty()) return true;
  }
  return false;
}

void add_polygon(TriangleMesh& mesh, const std::vector<std::uint32_t>& poly) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    mesh.faces.push_back({poly[0], poly[k], poly[k + 1]});
  }
}

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

TriangleMesh parse_off(std::istream& in) {
  std::string buffer;
  std::size_t line_no = 0;
  std::vector<std::string_view> tok;

  if (!next_content_line(in, buffer, line_no, tok)) throw ParseError("empty OFF file", 0);
  if (tok[0] != "OFF") throw ParseError("missing OFF header", line_no);
  tok.erase(tok.begin());
  if (tok.empty() && !next_content_line(in, buffer, line_no, tok)) {
    throw ParseError("missing OFF counts", line_no + 1);
  }
  if (tok.size() < 2) throw ParseError("OFF counts need vertex and face numbers", line_no);
  const long long nv = to_integer(tok[0], line_no);
  const long long nf = to_integer(tok[1], line_no);
  if (nv < 0 || nf < 0) throw ParseError("negative element count", line_no);

  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    if (!next_content_line(in, buffer, line_no, tok)) {
      throw ParseError("expected vertex " + std::to_string(i + 1) + " of " + std::to_string(nv) +
                           ", reached end of file",
                       line_no + 1);
    }
    if (tok.size() != 3) {
      throw ParseError("expected 3 vertex coordinates, got " + std::to_string(tok.size()),
                       line_no);
    }
    mesh.vertices.emplace_back(to_double(tok[0], line_no), to_double(tok[1], line_no),
                               to_double(tok[2], line_no));
  }

  std::vector<std::uint32_t> poly;
  for (long long f = 0; f < nf; ++f) {
    if (!next_content_line(in, buffer, line_no, tok)) {
      throw ParseError("expected face " + std::to_string(f + 1) + " of " + std::to_string(nf) +
                           ", reached end of file",
                       line_no + 1);
    }
    const long long k = to_integer(tok[0], line_no);
    if (k < 3 || static_cast<long long>(tok.size()) < k + 1) {
      throw ParseError("malformed face record", line_no);
    }
    poly.clear();
    for (long long j = 1; j <= k; ++j) {
      const long long idx = to_integer(tok[static_cast<std::size_t>(j)], line_no);
      if (idx < 0 || idx >= nv) throw ParseError("face index out of range", line_no);
      poly.push_back(static_cast<std::uint32_t>(idx));
    }
    add_polygon(mesh, poly);
  }
  return mesh;
}

TriangleMesh parse_obj(std::istream& in) {
  TriangleMesh mesh;
  std::string buffer;
  std::size_t line_no = 0;
  std::vector<std::uint32_t> poly;
  while (std::getline(in, buffer)) {
    ++line_no;
    auto tok = split_ws(strip_comment(buffer));
    if (tok.empty()) continue;
    if (tok[0] == "v") {
      if (tok.size() < 4) throw ParseError("vertex needs 3 coordinates", line_no);
      mesh.vertices.emplace_back(to_double(tok[1], line_no), to_double(tok[2], line_no),
                                 to_double(tok[3], line_no));
    } else if (tok[0] == "f") {
      if (tok.size() < 4) throw ParseError("face needs at least 3 vertices", line_no);
      poly.clear();
      for (std::size_t j = 1; j < tok.size(); ++j) {
        // v, v/vt, v/vt/vn, v//vn
        std::string_view ref = tok[j].substr(0, tok[j].find('/'));
        long long idx = to_integer(ref, line_no);
        const auto nv = static_cast<long long>(mesh.vertices.size());
        if (idx < 0) idx = nv + idx + 1;
        if (idx < 1 || idx > nv) throw ParseError("face index out of range", line_no);
        poly.push_back(static_cast<std::uint32_t>(idx - 1));
      }
      add_polygon(mesh, poly);
    }
  }
  return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  if (ext != ".off" && ext != ".obj") {
    throw UnsupportedFormatError("unsupported mesh format '" + ext + "': " + path.string());
  }
  std::ifstream in(path);
  if (!in) throw Error("cannot open mesh file: " + path.string());
  TriangleMesh mesh = ext == ".off" ? parse_off(in) : parse_obj(in);
  mesh.validate();
  return mesh;
}

void save_off(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file: " + path.string());
  out.precision(17);
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
  for (const auto& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
}

}  // namespace pcc
