#pragma once

namespace polarcone {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace polarcone
