#pragma once

namespace l1sketch {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace l1sketch
