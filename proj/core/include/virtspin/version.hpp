#pragma once

namespace virtspin {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace virtspin
