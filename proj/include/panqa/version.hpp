#pragma once

namespace panqa {

inline constexpr const char* kVersion = "0.1.0";

// CLI defaults, echoed by `panqa version`.
inline constexpr double kDefaultPeak = 255.0;
inline constexpr int kDefaultLowpassSize = 5;

}  // namespace panqa
