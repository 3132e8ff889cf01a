#pragma once

namespace ltlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ltlab
