#pragma once

namespace qot {
inline constexpr const char* kVersion = "0.1.0";
}  // namespace qot
