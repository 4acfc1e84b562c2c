#pragma once

namespace fraclayer {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fraclayer
