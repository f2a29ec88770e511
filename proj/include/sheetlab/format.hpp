#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace sheetlab {

/// Shortest-form general notation with 17 significant digits, locale-free.
inline std::string format_double(double v)
{
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc{})
    return "nan";
  return std::string(buf, res.ptr);
}

}  // namespace sheetlab
