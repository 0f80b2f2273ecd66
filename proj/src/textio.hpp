#pragma once

// Locale-independent text serialization helpers shared by the file formats
// and the CSV writer. Doubles use shortest round-trip formatting.

#include <charconv>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modrec::textio {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::runtime_error(std::string("malformed ") + what + ": '" + std::string(text) + "'");
  return v;
}

inline long long parse_int(std::string_view text, const char* what) {
  long long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::runtime_error(std::string("malformed ") + what + ": '" + std::string(text) + "'");
  return v;
}

inline unsigned long long parse_uint(std::string_view text, const char* what) {
  unsigned long long v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw std::runtime_error(std::string("malformed ") + what + ": '" + std::string(text) + "'");
  return v;
}

inline std::string_view header_value(std::string_view line, std::string_view key) {
  if (line.size() <= key.size() || line.substr(0, key.size()) != key || line[key.size()] != '=')
    throw std::runtime_error("expected header '" + std::string(key) + "=', got '" + std::string(line) +
                             "'");
  return line.substr(key.size() + 1);
}

inline std::string read_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(std::string("unexpected end of input reading ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace modrec::textio
