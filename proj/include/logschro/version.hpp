#pragma once

namespace logschro {

inline constexpr const char* kVersion = "logschro 0.1.0";

}  // namespace logschro
