#pragma once

#include <cstddef>

#include "cafda/grid.hpp"
#include "cafda/image.hpp"

namespace cafda::imgproc {

/// How samples outside the grid are resolved.
enum class Border {
  kZero,        ///< constant 0
  kClamp,       ///< nearest edge pixel
  kReflect,     ///< d c b a | a b c d  (half-sample symmetric)
  kReflect101,  ///< d c b | a b c d    (whole-sample symmetric)
};

/// Maps an out-of-range index into [0, n) under the given border rule.
/// Returns -1 for kZero when the index falls outside.
std::ptrdiff_t border_index(std::ptrdiff_t i, std::ptrdiff_t n, Border border) noexcept;

/// Inverse-mapped affine transform: the output pixel (x, y) samples the
/// source at (a*x + b*y + c, d*x + e*y + f). Coordinates are pixel indices.
struct Affine {
  double a = 1.0, b = 0.0, c = 0.0;
  double d = 0.0, e = 1.0, f = 0.0;

  static Affine identity() { return {}; }
  /// Rotation of the content by `degrees` counter-clockwise about the grid center.
  static Affine rotation(double degrees, std::size_t height, std::size_t width);
  static Affine shear_x(double amount) { return {1.0, amount, 0.0, 0.0, 1.0, 0.0}; }
  static Affine shear_y(double amount) { return {1.0, 0.0, 0.0, amount, 1.0, 0.0}; }
  static Affine translation(double dx, double dy) { return {1.0, 0.0, dx, 0.0, 1.0, dy}; }

  bool is_identity() const noexcept {
    return a == 1.0 && b == 0.0 && c == 0.0 && d == 0.0 && e == 1.0 && f == 0.0;
  }
};

double sample_bilinear(const Plane& src, double x, double y, Border border) noexcept;

Plane warp_bilinear(const Plane& src, const Affine& map, Border border);
Image warp_bilinear(const Image& src, const Affine& map, Border border);
Mask warp_nearest(const Mask& src, const Affine& map);

/// Bilinear resize with pixel-center alignment and edge clamping.
Plane resize_bilinear(const Plane& src, std::size_t height, std::size_t width);
Image resize_bilinear(const Image& src, std::size_t height, std::size_t width);
Mask resize_nearest(const Mask& src, std::size_t height, std::size_t width);

/// Separable Gaussian filter; the kernel radius is ceil(truncate * sigma).
/// sigma <= 0 returns a copy.
Plane gaussian_blur(const Plane& src, double sigma, Border border, double truncate = 4.0);

/// 2-D correlation with an odd-sized kernel centered on each pixel.
Plane filter2d(const Plane& src, const Plane& kernel, Border border);

}  // namespace cafda::imgproc
