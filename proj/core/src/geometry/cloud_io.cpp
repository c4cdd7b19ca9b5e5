#include "pcc/geometry/cloud_io.hpp"

#include "pcc/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace pcc {
namespace {

static_assert(std::endian::native == std::endian::little, "binary cloud I/O assumes little-endian");

enum class Format { kText, kBinary };

Format format_for(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext == ".xyz" || ext == ".txt") return Format::kText;
  if (ext == ".bin") return Format::kBinary;
  throw UnsupportedFormatError("unsupported point cloud format '" + ext + "': " + path.string());
}

void write_cloud(const std::filesystem::path& path, const PointCloud& cloud,
                 const std::vector<std::uint8_t>* labels) {
  const Format format = format_for(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write point cloud: " + path.string());
  if (format == Format::kText) {
    fmt::memory_buffer buf;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const Vec3& p = cloud[i];
      if (labels) {
        fmt::format_to(std::back_inserter(buf), "{:.9f} {:.9f} {:.9f} {}\n", p.x(), p.y(), p.z(),
                       (*labels)[i]);
      } else {
        fmt::format_to(std::back_inserter(buf), "{:.9f} {:.9f} {:.9f}\n", p.x(), p.y(), p.z());
      }
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    return;
  }
  const std::uint64_t count = cloud.size();
  out.write(reinterpret_cast<const char*>(&count), sizeof(count));
  const std::size_t channels = labels ? 4 : 3;
  std::vector<float> payload(cloud.size() * channels);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (int d = 0; d < 3; ++d) payload[i * channels + d] = static_cast<float>(cloud[i][d]);
    if (labels) payload[i * channels + 3] = static_cast<float>((*labels)[i]);
  }
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
}

LabeledCloud read_cloud(const std::filesystem::path& path, bool want_labels) {
  const Format format = format_for(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open point cloud: " + path.string());
  LabeledCloud result;
  bool has_labels = false;

  if (format == Format::kText) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(line);
      std::array<double, 4> v{};
      std::size_t n = 0;
      std::string token;
      while (ls >> token) {
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), x);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
          throw ParseError("non-numeric value '" + token + "'", line_no);
        }
        if (n < 4) v[n] = x;
        ++n;
      }
      if (n != 3 && n != 4) throw ParseError("expected 3 or 4 columns", line_no);
      if (columns == 0) columns = n;
      if (n != columns) throw ParseError("inconsistent column count", line_no);
      result.points.points.emplace_back(v[0], v[1], v[2]);
      if (n == 4) {
        if (v[3] != 0.0 && v[3] != 1.0) throw ParseError("label must be 0 or 1", line_no);
        result.labels.push_back(static_cast<std::uint8_t>(v[3]));
      }
    }
    has_labels = columns == 4;
  } else {
    std::uint64_t count = 0;
    if (!in.read(reinterpret_cast<char*>(&count), sizeof(count))) {
      throw ParseError("truncated binary cloud header: " + path.string(), 0);
    }
    in.seekg(0, std::ios::end);
    const auto payload_bytes = static_cast<std::uint64_t>(in.tellg()) - sizeof(count);
    in.seekg(sizeof(count), std::ios::beg);
    std::size_t channels = 0;
    if (payload_bytes == count * 3 * sizeof(float)) {
      channels = 3;
    } else if (payload_bytes == count * 4 * sizeof(float)) {
      channels = 4;
    } else {
      throw ParseError("binary cloud size does not match its header count: " + path.string(), 0);
    }
    std::vector<float> payload(count * channels);
    in.read(reinterpret_cast<char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
    result.points.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const float* p = &payload[i * channels];
      result.points.points.emplace_back(p[0], p[1], p[2]);
      if (channels == 4) {
        if (p[3] != 0.0f && p[3] != 1.0f) throw ParseError("label must be 0 or 1", 0);
        result.labels.push_back(static_cast<std::uint8_t>(p[3]));
      }
    }
    has_labels = channels == 4;
  }

  if (want_labels && !has_labels) {
    throw ParseError("point cloud has no label channel: " + path.string(), 0);
  }
  if (!want_labels) result.labels.clear();
  return result;
}

}  // namespace

void save_cloud(const std::filesystem::path& path, const PointCloud& cloud) {
  write_cloud(path, cloud, nullptr);
}

void save_labeled_cloud(const std::filesystem::path& path, const LabeledCloud& cloud) {
  cloud.validate();
  write_cloud(path, cloud.points, &cloud.labels);
}

PointCloud load_cloud(const std::filesystem::path& path) {
  return std::move(read_cloud(path, false).points);
}

LabeledCloud load_labeled_cloud(const std::filesystem::path& path) {
  return read_cloud(path, true);
}

}  // namespace pcc
