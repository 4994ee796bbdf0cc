#pragma once

#include <cstddef>
#include <vector>

#include "cafda/grid.hpp"
#include "cafda/image.hpp"

namespace cafda {

struct FusionParams {
  double alpha = 1.0;  ///< weight of the target amplitude inside the region, [0,1]
  double beta = 0.0;   ///< region half-extent as a fraction of each side, [0,1]

  void validate() const;
};

/// Centered low-frequency rectangle of a DC-centered spectrum. Half-extents
/// are floor(beta*H) and floor(beta*W); rows [H/2 - bh, H/2 + bh] and columns
/// [W/2 - bw, W/2 + bw] are intersected with the grid. beta == 0 is empty.
struct FusedRegion {
  std::size_t half_height = 0;
  std::size_t half_width = 0;
  std::size_t row_begin = 0, row_end = 0;  ///< [begin, end) in centered rows
  std::size_t col_begin = 0, col_end = 0;  ///< [begin, end) in centered columns

  static FusedRegion compute(double beta, std::size_t height, std::size_t width);

  bool empty() const noexcept { return row_begin == row_end || col_begin == col_end; }
  std::size_t rows() const noexcept { return row_end - row_begin; }
  std::size_t cols() const noexcept { return col_end - col_begin; }
  bool contains(std::size_t row, std::size_t col) const noexcept {
    return row >= row_begin && row < row_end && col >= col_begin && col < col_end;
  }
};

/// (1 - alpha) * a_src + alpha * a_tgt inside the region, a_src elsewhere.
Plane fuse_amplitude(const Plane& a_src, const Plane& a_tgt, const FusionParams& params);

/// Which algebraic route fda_transform takes. Both are exact; kAuto picks
/// the region-only route when the region is at most kRegionRouteMaxExtent
/// bins on each side.
enum class FusionRoute { kAuto, kFullSpectrum, kRegionOnly };

inline constexpr std::size_t kRegionRouteMaxExtent = 16;

/// Per-channel amplitude fusion followed by the inverse transform with the
/// source phase. The target is bilinearly resampled to the source size when
/// the two differ. Output is clamped to [0,1]. An empty region or alpha == 0
/// returns the source unchanged.
Image fda_transform(const Image& src, const Image& tgt, const FusionParams& params,
                    FusionRoute route = FusionRoute::kAuto);

/// As fda_transform, but returns the real inverse-transform output before clamping.
std::vector<Plane> fda_transform_unclamped(const Image& src, const Image& tgt,
                                           const FusionParams& params,
                                           FusionRoute route = FusionRoute::kAuto);

}  // namespace cafda
