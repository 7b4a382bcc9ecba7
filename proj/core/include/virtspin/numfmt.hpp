#pragma once

// Scientific notation with 12 significant digits and a compact exponent
// ("4.90000000000e2", "-1.23000000000e-5"). Shared by every column-data
// writer so numeric output stays byte-stable across runs.

#include <string>

namespace virtspin::numfmt {

std::string sci12(double v);

}  // namespace virtspin::numfmt
