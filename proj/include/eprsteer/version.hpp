#pragma once

namespace eprsteer {
inline constexpr const char* kVersion = "0.1.0";
}
