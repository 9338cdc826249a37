#pragma once

namespace gpsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gpsim
