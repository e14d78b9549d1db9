#pragma once

namespace fplab {

inline constexpr const char* kVersion = "0.1.0";

} // namespace fplab
