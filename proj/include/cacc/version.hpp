#pragma once

namespace cacc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cacc
