#pragma once

#include <charconv>
#include <string>

namespace riemflow::detail {

/// Shortest round-trip decimal form of a double; locale-independent, '.' as
/// the decimal separator. Keeps emitted trace files byte-stable.
inline std::string format_double(double value) {
  char buffer[64];
  const auto result =
      std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace riemflow::detail
