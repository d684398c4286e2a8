#pragma once

namespace qmx {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qmx
