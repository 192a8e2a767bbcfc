#pragma once

#include <cstdio>
#include <string>

namespace omnivic {

// Shortest %g rendering at the given number of significant digits. Negative
// zero is normalized to "0" so serialized files never depend on the sign of
// a zero.
inline std::string format_sig(double value, int significant_digits) {
  if (value == 0.0) {
    return "0";
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, value);
  return std::string(buf);
}

}  // namespace omnivic
