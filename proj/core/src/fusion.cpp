#include "cafda/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cafda/imgproc.hpp"
#include "cafda/spectral.hpp"

namespace cafda {

void FusionParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("fusion: alpha must be in [0,1], got " + std::to_string(alpha));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw ValidationError("fusion: beta must be in [0,1], got " + std::to_string(beta));
  }
}

namespace {

// floor(beta * n), tolerant of products like 0.3 * 10 = 2.9999999999999996.
std::size_t half_extent(double beta, std::size_t n) {
  return static_cast<std::size_t>(std::floor(beta * static_cast<double>(n) + 1e-9));
}

void span_around(std::size_t center, std::size_t half, std::size_t n, std::size_t& begin,
                 std::size_t& end) {
  begin = half >= center ? 0 : center - half;
  end = std::min(n, center + half + 1);
}

}  // namespace

FusedRegion FusedRegion::compute(double beta, std::size_t height, std::size_t width) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("fused region: beta must be in [0,1]");
  FusedRegion region;
  if (beta == 0.0 || height == 0 || width == 0) return region;
  region.half_height = half_extent(beta, height);
  region.half_width = half_extent(beta, width);
  span_around(height / 2, region.half_height, height, region.row_begin, region.row_end);
  span_around(width / 2, region.half_width, width, region.col_begin, region.col_end);
  return region;
}

Plane fuse_amplitude(const Plane& a_src, const Plane& a_tgt, const FusionParams& params) {
  params.validate();
  require_same_shape(a_src, a_tgt, "fuse_amplitude");
  Plane out = a_src;
  const FusedRegion region = FusedRegion::compute(params.beta, a_src.height(), a_src.width());
  const double alpha = params.alpha;
  for (std::size_t r = region.row_begin; r < region.row_end; ++r) {
    for (std::size_t c = region.col_begin; c < region.col_end; ++c) {
      // alpha == 1 must reproduce the target bit-exactly.
      out(r, c) = alpha == 1.0 ? a_tgt(r, c) : (1.0 - alpha) * a_src(r, c) + alpha * a_tgt(r, c);
    }
  }
  return out;
}

namespace {

Plane fuse_channel_full(const Plane& src, const Plane& tgt, const FusionParams& params) {
  const PolarSpectrum s = decompose(forward_dft(src));
  const PolarSpectrum t = decompose(forward_dft(tgt));
  const Plane fused = fuse_amplitude(s.amplitude, t.amplitude, params);
  return inverse_dft_unclamped(recompose(fused, s.phase));
}

// Separable DFT restricted to the fused region. Because the fused spectrum
// differs from the source spectrum only inside the region, the output is
// x + F^-1(delta) where delta lives on a handful of bins.
class RegionTransform {
 public:
  RegionTransform(const FusedRegion& region, std::size_t height, std::size_t width)
      : height_(height), width_(width), rows_(region.rows()), cols_(region.cols()) {
    // kernel(k, n) = exp(-2 pi i * freq_k * n / N); freq of centered index j is j - N/2.
    auto fill = [](std::vector<Complex>& table, std::size_t begin, std::size_t count,
                   std::size_t n) {
      table.resize(count * n);
      for (std::size_t k = 0; k < count; ++k) {
        const auto freq = static_cast<std::ptrdiff_t>(begin + k) - static_cast<std::ptrdiff_t>(n / 2);
        const auto nat = static_cast<std::size_t>((freq % static_cast<std::ptrdiff_t>(n) +
                                                   static_cast<std::ptrdiff_t>(n)) %
                                                  static_cast<std::ptrdiff_t>(n));
        for (std::size_t x = 0; x < n; ++x) {
          const std::size_t idx = (nat * x) % n;
          const double phase = -2.0 * std::numbers::pi * static_cast<double>(idx) / static_cast<double>(n);
          table[k * n + x] = {std::cos(phase), std::sin(phase)};
        }
      }
    };
    fill(col_kernel_, region.col_begin, cols_, width_);
    fill(row_kernel_, region.row_begin, rows_, height_);
  }

  /// Region bins of the forward transform, rows_ x cols_ row-major.
  std::vector<Complex> forward(const Plane& x) const {
    std::vector<Complex> partial(height_ * cols_);
    for (std::size_t y = 0; y < height_; ++y) {
      auto in = x.row(y);
      for (std::size_t j = 0; j < cols_; ++j) {
        const Complex* k = &col_kernel_[j * width_];
        double re = 0.0, im = 0.0;
        for (std::size_t xx = 0; xx < width_; ++xx) {
          re += in[xx] * k[xx].real();
          im += in[xx] * k[xx].imag();
        }
        partial[y * cols_ + j] = {re, im};
      }
    }
    std::vector<Complex> bins(rows_ * cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      const Complex* k = &row_kernel_[i * height_];
      for (std::size_t j = 0; j < cols_; ++j) {
        Complex acc{};
        for (std::size_t y = 0; y < height_; ++y) acc += partial[y * cols_ + j] * k[y];
        bins[i * cols_ + j] = acc;
      }
    }
    return bins;
  }

  /// Adds the real part of the inverse transform of the region bins to `out`.
  void add_inverse(const std::vector<Complex>& bins, Plane& out) const {
    std::vector<Complex> partial(height_ * cols_);
    for (std::size_t y = 0; y < height_; ++y) {
      for (std::size_t j = 0; j < cols_; ++j) {
        Complex acc{};
        for (std::size_t i = 0; i < rows_; ++i) {
          acc += bins[i * cols_ + j] * std::conj(row_kernel_[i * height_ + y]);
        }
        partial[y * cols_ + j] = acc;
      }
    }
    const double scale = 1.0 / static_cast<double>(height_ * width_);
    for (std::size_t y = 0; y < height_; ++y) {
      auto dst = out.row(y);
      for (std::size_t xx = 0; xx < width_; ++xx) {
        double re = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
          const Complex& p = partial[y * cols_ + j];
          const Complex& k = col_kernel_[j * width_ + xx];
          // Re(p * conj(k))
          re += p.real() * k.real() + p.imag() * k.imag();
        }
        dst[xx] += re * scale;
      }
    }
  }

 private:
  std::size_t height_, width_, rows_, cols_;
  std::vector<Complex> col_kernel_;
  std::vector<Complex> row_kernel_;
};

Plane fuse_channel_region(const RegionTransform& transform, const Plane& src, const Plane& tgt,
                          double alpha) {
  const std::vector<Complex> s = transform.forward(src);
  const std::vector<Complex> t = transform.forward(tgt);
  std::vector<Complex> delta(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double a_s = std::abs(s[k]);
    const double a_t = std::abs(t[k]);
    const double fused = alpha == 1.0 ? a_t : (1.0 - alpha) * a_s + alpha * a_t;
    const Complex unit = a_s == 0.0 ? Complex{1.0, 0.0} : s[k] / a_s;
    delta[k] = (fused - a_s) * unit;
  }
  Plane out = src;
  transform.add_inverse(delta, out);
  return out;
}

}  // namespace

std::vector<Plane> fda_transform_unclamped(const Image& src, const Image& tgt,
                                           const FusionParams& params, FusionRoute route) {
  params.validate();
  validate_image(src, "fda_transform source");
  validate_image(tgt, "fda_transform target");
  if (src.channels() != tgt.channels()) {
    throw ValidationError("fda_transform: channel count mismatch (" +
                          std::to_string(src.channels()) + " vs " +
                          std::to_string(tgt.channels()) + ")");
  }
  const FusedRegion region = FusedRegion::compute(params.beta, src.height(), src.width());
  if (region.empty() || params.alpha == 0.0) {
    return {src.planes().begin(), src.planes().end()};
  }
  const Image resized = tgt.height() == src.height() && tgt.width() == src.width()
                            ? Image{}
                            : imgproc::resize_bilinear(tgt, src.height(), src.width());
  const Image& target = resized.empty() ? tgt : resized;

  if (route == FusionRoute::kAuto) {
    route = region.rows() <= kRegionRouteMaxExtent && region.cols() <= kRegionRouteMaxExtent
                ? FusionRoute::kRegionOnly
                : FusionRoute::kFullSpectrum;
  }
  std::vector<Plane> out;
  out.reserve(src.channels());
  if (route == FusionRoute::kRegionOnly) {
    const RegionTransform transform(region, src.height(), src.width());
    for (std::size_t c = 0; c < src.channels(); ++c) {
      out.push_back(fuse_channel_region(transform, src.channel(c), target.channel(c), params.alpha));
    }
  } else {
    for (std::size_t c = 0; c < src.channels(); ++c) {
      out.push_back(fuse_channel_full(src.channel(c), target.channel(c), params));
    }
  }
  return out;
}

Image fda_transform(const Image& src, const Image& tgt, const FusionParams& params,
                    FusionRoute route) {
  Image out(fda_transform_unclamped(src, tgt, params, route));
  clamp_unit(out);
  return out;
}

}  // namespace cafda
