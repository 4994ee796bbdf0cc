#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cafda/grid.hpp"

namespace cafda {

/// H x W x C raster of intensities in [0,1], stored as one Plane per channel.
class Image {
 public:
  Image() = default;
  Image(std::size_t height, std::size_t width, std::size_t channels, double fill = 0.0);
  explicit Image(std::vector<Plane> channels);

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t channels() const noexcept { return planes_.size(); }
  bool empty() const noexcept { return planes_.empty(); }

  Plane& channel(std::size_t c) { return planes_.at(c); }
  const Plane& channel(std::size_t c) const { return planes_.at(c); }
  std::span<Plane> planes() noexcept { return planes_; }
  std::span<const Plane> planes() const noexcept { return planes_; }

  double& at(std::size_t row, std::size_t col, std::size_t c) { return planes_[c](row, col); }
  double at(std::size_t row, std::size_t col, std::size_t c) const { return planes_[c](row, col); }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_ && channels() == other.channels();
  }

  friend bool operator==(const Image& a, const Image& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.planes_ == b.planes_;
  }

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<Plane> planes_;
};

/// Throws ValidationError unless every value is finite and within [0,1].
void validate_image(const Image& img, const char* context);

/// Throws ValidationError unless every value is finite.
void validate_finite(const Plane& plane, const char* context);

void clamp_unit(Plane& plane) noexcept;
void clamp_unit(Image& img) noexcept;

/// Builds an image from a contiguous row-major H x W x C buffer (channel fastest).
Image from_interleaved(std::span<const double> buffer, std::size_t height, std::size_t width,
                       std::size_t channels);

/// Writes the image as a contiguous row-major H x W x C buffer.
std::vector<double> to_interleaved(const Image& img);

/// Largest absolute per-pixel difference; images must share a shape.
double max_abs_diff(const Image& a, const Image& b);
double max_abs_diff(const Plane& a, const Plane& b);

}  // namespace cafda
