#pragma once

#include <cstdio>
#include <string>

namespace qthermo {

// Full double precision (17 significant digits); the CLI never changes the C locale.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace qthermo
