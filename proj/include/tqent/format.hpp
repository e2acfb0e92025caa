#pragma once

// Locale-independent number formatting shared by CSV and text output.

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace tqent {

// Shortest %.{digits}g rendering with a dot decimal separator.
inline std::string format_number(double v, int digits = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // fold -0 into 0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, digits);
  return res.ec == std::errc{} ? std::string(buf, res.ptr) : std::string("nan");
}

}  // namespace tqent
