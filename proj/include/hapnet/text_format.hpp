#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <system_error>
#include <vector>

namespace hapnet::text {

/// Shortest round-trip decimal form; independent of locale.
inline std::string num(double v)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc())
    return "nan";
  return std::string(buf, ptr);
}

inline std::string num(std::size_t v) { return std::to_string(v); }

template <typename T>
std::string join(const std::vector<T>& xs, char sep = ' ')
{
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i)
      s += sep;
    s += num(xs[i]);
  }
  return s;
}

} // namespace hapnet::text
