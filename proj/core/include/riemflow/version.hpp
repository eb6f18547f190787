#pragma once

namespace riemflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace riemflow
