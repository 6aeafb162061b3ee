#pragma once
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace warplab {

// Shortest text that round-trips a binary64 value (17 significant digits).
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_xy_csv(std::ostream& os, const std::vector<std::pair<double, double>>& xy) {
    os << "x,y\n";
    for (const auto& [x, y] : xy) os << format_g17(x) << ',' << format_g17(y) << '\n';
}

}  // namespace warplab
