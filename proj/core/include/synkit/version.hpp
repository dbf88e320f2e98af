#pragma once

namespace synkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace synkit
