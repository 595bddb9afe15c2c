#pragma once

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace budgetpath::detail {

/// Shortest text that round-trips a double; infinities print as "inf".
inline std::string format_number(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

inline double parse_number(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (token.empty() || *end != '\0') throw std::runtime_error("bad number: '" + token + "'");
  return v;
}

}  // namespace budgetpath::detail
