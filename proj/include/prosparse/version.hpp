#pragma once

namespace prosparse {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace prosparse
