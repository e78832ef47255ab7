#pragma once

namespace optagg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace optagg
