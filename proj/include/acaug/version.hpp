#pragma once

namespace acaug {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace acaug
