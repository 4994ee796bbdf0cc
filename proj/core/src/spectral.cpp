#include "cafda/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cafda/fft.hpp"
#include "cafda/image.hpp"

namespace cafda {

namespace {

Spectrum shifted(const Spectrum& in, std::size_t row_shift, std::size_t col_shift) {
  const std::size_t h = in.height();
  const std::size_t w = in.width();
  Spectrum out(h, w);
  for (std::size_t r = 0; r < h; ++r) {
    const std::size_t dr = (r + row_shift) % h;
    for (std::size_t c = 0; c < w; ++c) out(dr, (c + col_shift) % w) = in(r, c);
  }
  return out;
}

}  // namespace

Spectrum center_spectrum(const Spectrum& natural) {
  return shifted(natural, natural.height() / 2, natural.width() / 2);
}

Spectrum uncenter_spectrum(const Spectrum& centered) {
  const std::size_t h = centered.height();
  const std::size_t w = centered.width();
  return shifted(centered, h - h / 2, w - w / 2);
}

Spectrum forward_dft(const Plane& channel) {
  if (channel.empty()) throw ValidationError("forward_dft: empty channel");
  validate_finite(channel, "forward_dft");
  const std::size_t h = channel.height();
  const std::size_t w = channel.width();
  // Transform straight into centered layout: write x into natural order,
  // transform, then rotate.
  Spectrum work(h, w);
  auto src = channel.values();
  auto dst = work.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
  fft::transform_2d(work, fft::Direction::kForward);
  return center_spectrum(work);
}

Plane inverse_dft_unclamped(const Spectrum& spectrum) {
  if (spectrum.empty()) throw ValidationError("inverse_dft: empty spectrum");
  for (const Complex& v : spectrum.values()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ValidationError("inverse_dft: non-finite spectrum value");
    }
  }
  Spectrum work = uncenter_spectrum(spectrum);
  fft::transform_2d(work, fft::Direction::kInverse);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  Plane out(spectrum.height(), spectrum.width());
  auto src = work.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i].real() * scale;
  return out;
}

Plane inverse_dft(const Spectrum& spectrum) {
  Plane out = inverse_dft_unclamped(spectrum);
  clamp_unit(out);
  return out;
}

PolarSpectrum decompose(const Spectrum& spectrum) {
  PolarSpectrum out{Plane(spectrum.height(), spectrum.width()),
                    Plane(spectrum.height(), spectrum.width())};
  auto src = spectrum.values();
  auto amp = out.amplitude.values();
  auto ph = out.phase.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    amp[i] = std::abs(src[i]);
    // atan2 returns -pi for (-x, -0.0); fold it to +pi to stay in (-pi, pi].
    double p = amp[i] == 0.0 ? 0.0 : std::arg(src[i]);
    if (p == -std::numbers::pi) p = std::numbers::pi;
    ph[i] = p;
  }
  return out;
}

Spectrum recompose(const Plane& amplitude, const Plane& phase) {
  require_same_shape(amplitude, phase, "recompose");
  Spectrum out(amplitude.height(), amplitude.width());
  auto amp = amplitude.values();
  auto ph = phase.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    if (!std::isfinite(amp[i]) || amp[i] < 0.0) {
      throw ValidationError("recompose: amplitude must be finite and non-negative");
    }
    if (!std::isfinite(ph[i])) throw ValidationError("recompose: non-finite phase");
    dst[i] = std::polar(amp[i], ph[i]);
  }
  return out;
}

}  // namespace cafda
