#pragma once

namespace qtrack {

inline constexpr const char* kVersionString = "qtrack 0.1.0";

}  // namespace qtrack
