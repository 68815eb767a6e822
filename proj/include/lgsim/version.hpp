#pragma once

namespace lgsim {

inline constexpr const char* kVersion = "0.1.0";

} // namespace lgsim
