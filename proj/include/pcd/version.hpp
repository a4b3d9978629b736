#pragma once

namespace pcd {

inline constexpr const char* kToolName = "pcd";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace pcd
