#pragma once

#include <string_view>

namespace cafda {

inline constexpr std::string_view kVersion = "0.1.0";

/// Identifies the layout of SampleTransform and the interleaved buffer
/// helpers. Extensions built against a different string must refuse to load.
inline constexpr std::string_view kAbiVersion = "cafda-abi-1";

}  // namespace cafda
