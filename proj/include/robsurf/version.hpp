#pragma once

#include <string_view>

namespace robsurf {

inline constexpr std::string_view kVersion = "1.0.0";

}  // namespace robsurf
