#pragma once

namespace omcav {

inline constexpr const char* version = "0.1.0";

} // namespace omcav
