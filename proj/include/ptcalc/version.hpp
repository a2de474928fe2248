#pragma once

namespace ptcalc {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ptcalc
