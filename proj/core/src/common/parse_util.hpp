#pragma once

#include "pcc/error.hpp"

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

namespace pcc::detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key) {
  text = trim(text);
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw InvalidArgument("invalid value for '" + std::string(key) + "': '" + std::string(text) +
                          "'");
  }
  return v;
}

inline std::size_t parse_size(std::string_view text, std::string_view key) {
  return parse_number<std::size_t>(text, key);
}

inline double parse_real(std::string_view text, std::string_view key) {
  return parse_number<double>(text, key);
}

}  // namespace pcc::detail
