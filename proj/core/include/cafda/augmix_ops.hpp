#pragma once

// Strength table for the augmentation ops. A magnitude level L in [1, 10]
// bounds the draw: the op strength is sampled as u ~ U(0.1, L) and mapped to
//   int ops:   floor(u * max / 10)
//   float ops: u * max / 10
// so level 10 approaches the maxima below.

namespace cafda::augmix_limits {

inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 10;
inline constexpr double kLevelFloor = 0.1;

inline constexpr int kRotateMaxDegrees = 30;
inline constexpr double kShearMax = 0.3;
inline constexpr double kTranslateMaxFraction = 1.0 / 3.0;  ///< of the image side along the axis
inline constexpr int kPosterizeMaxBitReduction = 4;         ///< bits kept = 4 - reduction
inline constexpr int kPosterizeBaseBits = 4;
inline constexpr int kSolarizeMaxLevels = 256;              ///< threshold = (255 - k) / 255

}  // namespace cafda::augmix_limits
