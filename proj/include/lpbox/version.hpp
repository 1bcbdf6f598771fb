#pragma once

namespace lpbox {

inline constexpr const char* kVersion = "v0.1.0";

}  // namespace lpbox
