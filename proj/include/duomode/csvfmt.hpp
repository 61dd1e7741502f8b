#pragma once

#include <cstdio>
#include <string>

namespace duomode {

/// Fixed 12-significant-digit rendering; byte-stable across runs.
inline std::string fmt12(double v) {
    if (v == 0.0) v = 0.0;  // canonicalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace duomode
