#pragma once

#include <cstdio>
#include <string>

namespace varlab {

/// printf-backed formatting; locale-independent, so emitted CSV/SVG bytes
/// are reproducible run to run.
inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

inline std::string fmt_full(double v) { return fmt("%.17g", v); }
inline std::string fmt_short(double v) { return fmt("%.6g", v); }

}  // namespace varlab
