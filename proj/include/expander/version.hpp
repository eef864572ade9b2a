#pragma once

namespace expander {
inline constexpr const char* kVersion = "0.1.0";
}
