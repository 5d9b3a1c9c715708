#pragma once

namespace fdte {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fdte
