#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace predsim::detail {

// Shortest representation that round-trips exactly; stable across runs.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace predsim::detail
