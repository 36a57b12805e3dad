#pragma once

namespace momentcone {

// Mirrors the CMake project version.
inline constexpr const char* kToolName = "momentcone";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace momentcone
