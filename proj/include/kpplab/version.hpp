#pragma once

namespace kpplab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace kpplab
