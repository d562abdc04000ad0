#pragma once

namespace sgl {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sgl
