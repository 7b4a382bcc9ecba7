#include "virtspin/numfmt.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace virtspin::numfmt {

std::string sci12(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);  // e.g. 4.90000000000e+02
    char* e = std::strchr(buf, 'e');
    const long expo = std::strtol(e + 1, nullptr, 10);
    std::string out(buf, e + 1);
    out += std::to_string(expo);
    return out;
}

}  // namespace virtspin::numfmt
