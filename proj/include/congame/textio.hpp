#pragma once

#include <cstdio>
#include <string>

namespace congame {

// Shortest decimal form at 12 significant digits, '.' separator. All file
// and stream output of reals goes through this so identical invocations
// stay byte-identical.
inline std::string real12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace congame
