#include "fecp/format.hpp"

#include <cmath>
#include <cstdio>

namespace fecp {

std::string format_fixed6(double v) {
  if (!std::isfinite(v)) return std::to_string(v);
  const double scaled = std::abs(v) * 1e6;
  double units = std::floor(scaled);
  const double frac = scaled - units;
  if (std::abs(frac - 0.5) < 1e-6) {
    if (std::fmod(units, 2.0) != 0.0) units += 1.0;
  } else if (frac > 0.5) {
    units += 1.0;
  }
  const long long whole = static_cast<long long>(units / 1e6);
  const long long part = static_cast<long long>(units - static_cast<double>(whole) * 1e6);
  char buf[64];
  const bool negative = v < 0 && units != 0.0;
  std::snprintf(buf, sizeof buf, "%s%lld.%06lld", negative ? "-" : "", whole, part);
  return buf;
}

}  // namespace fecp
