#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace divkit {

// Shortest round-trip decimal form; negative infinity keeps its reserved
// spelling so score files and reports can carry it.
inline std::string format_double(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace divkit
