#pragma once

namespace pidtune {

inline constexpr const char* kToolName = "pidtune";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace pidtune
