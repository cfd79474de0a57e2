#pragma once

namespace qb {

inline constexpr const char* version = "0.1.0";

}  // namespace qb
