#pragma once

#include <string_view>

namespace scimap {

inline constexpr std::string_view kEngineName = "scimap";
inline constexpr std::string_view kEngineVersion = "1.0.0";

}  // namespace scimap
