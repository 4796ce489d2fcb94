#pragma once

namespace dfrsim {

inline constexpr const char* kToolName = "dfrsim";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace dfrsim
