#pragma once

namespace optrec {

inline constexpr const char* kVersion = "0.1.0";

} // namespace optrec
