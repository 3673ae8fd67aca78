#pragma once

namespace ads {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ads
