#pragma once

namespace cmcs {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace cmcs
