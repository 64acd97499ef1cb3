#pragma once

namespace dwsync {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dwsync
