#pragma once

namespace hkm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hkm
