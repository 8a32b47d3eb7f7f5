#pragma once

#include <string_view>

namespace dabg {

inline constexpr std::string_view kToolName = "dabg";
inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace dabg
