#pragma once

namespace closurium {

inline constexpr const char* version = "0.1.0";

} // namespace closurium
