#include "cafda/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cafda {

Image::Image(std::size_t height, std::size_t width, std::size_t channels, double fill)
    : height_(height), width_(width) {
  if (height == 0 || width == 0 || channels == 0) {
    throw ValidationError("image: dimensions must be positive");
  }
  planes_.reserve(channels);
  for (std::size_t c = 0; c < channels; ++c) planes_.emplace_back(height, width, fill);
}

Image::Image(std::vector<Plane> channels) : planes_(std::move(channels)) {
  if (planes_.empty() || planes_.front().empty()) {
    throw ValidationError("image: dimensions must be positive");
  }
  height_ = planes_.front().height();
  width_ = planes_.front().width();
  for (const auto& p : planes_) require_same_shape(p, planes_.front(), "image channels");
}

void validate_finite(const Plane& plane, const char* context) {
  for (double v : plane.values()) {
    if (!std::isfinite(v)) throw ValidationError(std::string(context) + ": non-finite value");
  }
}

void validate_image(const Image& img, const char* context) {
  if (img.empty()) throw ValidationError(std::string(context) + ": empty image");
  for (const auto& p : img.planes()) {
    for (double v : p.values()) {
      if (!std::isfinite(v)) throw ValidationError(std::string(context) + ": non-finite value");
      if (v < 0.0 || v > 1.0) {
        throw ValidationError(std::string(context) + ": intensity outside [0,1]");
      }
    }
  }
}

void clamp_unit(Plane& plane) noexcept {
  for (double& v : plane.values()) v = std::clamp(v, 0.0, 1.0);
}

void clamp_unit(Image& img) noexcept {
  for (auto& p : img.planes()) clamp_unit(p);
}

Image from_interleaved(std::span<const double> buffer, std::size_t height, std::size_t width,
                       std::size_t channels) {
  if (buffer.size() != height * width * channels) {
    throw ValidationError("from_interleaved: buffer length must equal H*W*C");
  }
  Image img(height, width, channels);
  for (std::size_t c = 0; c < channels; ++c) {
    auto dst = img.channel(c).values();
    for (std::size_t i = 0; i < height * width; ++i) dst[i] = buffer[i * channels + c];
  }
  return img;
}

std::vector<double> to_interleaved(const Image& img) {
  const std::size_t n = img.height() * img.width();
  const std::size_t channels = img.channels();
  std::vector<double> out(n * channels);
  for (std::size_t c = 0; c < channels; ++c) {
    auto src = img.channel(c).values();
    for (std::size_t i = 0; i < n; ++i) out[i * channels + c] = src[i];
  }
  return out;
}

double max_abs_diff(const Plane& a, const Plane& b) {
  require_same_shape(a, b, "max_abs_diff");
  double worst = 0.0;
  auto va = a.values();
  auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) worst = std::max(worst, std::abs(va[i] - vb[i]));
  return worst;
}

double max_abs_diff(const Image& a, const Image& b) {
  if (a.channels() != b.channels()) throw ValidationError("max_abs_diff: channel count mismatch");
  double worst = 0.0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    worst = std::max(worst, max_abs_diff(a.channel(c), b.channel(c)));
  }
  return worst;
}

}  // namespace cafda
