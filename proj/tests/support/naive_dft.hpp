#pragma once

// Textbook O(N^4) 2-D DFT used as the reference for the fast transform.

#include <cmath>
#include <complex>
#include <numbers>

#include "cafda/grid.hpp"

namespace cafda::check {

/// Natural ordering (DC at (0,0)). Forward is unnormalized; inverse divides by H*W.
inline Spectrum naive_dft_2d(const Spectrum& in, bool inverse) {
  const std::size_t h = in.height();
  const std::size_t w = in.width();
  const double sign = inverse ? 1.0 : -1.0;
  Spectrum out(h, w);
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t v = 0; v < w; ++v) {
      std::complex<long double> acc = 0.0L;
      for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) {
          const long double turns = static_cast<long double>((u * y) % h) / h +
                                    static_cast<long double>((v * x) % w) / w;
          const long double angle = sign * 2.0L * std::numbers::pi_v<long double> * turns;
          const std::complex<long double> z(in(y, x).real(), in(y, x).imag());
          acc += z * std::complex<long double>(std::cos(angle), std::sin(angle));
        }
      }
      if (inverse) acc /= static_cast<long double>(h * w);
      out(u, v) = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
  }
  return out;
}

inline Spectrum to_complex(const Plane& p) {
  Spectrum out(p.height(), p.width());
  for (std::size_t i = 0; i < p.size(); ++i) out.values()[i] = p.values()[i];
  return out;
}

/// Frequency (u, v) moves to ((u + H/2) mod H, (v + W/2) mod W).
inline Spectrum shift_to_center(const Spectrum& s) {
  Spectrum out(s.height(), s.width());
  for (std::size_t u = 0; u < s.height(); ++u) {
    for (std::size_t v = 0; v < s.width(); ++v) {
      out((u + s.height() / 2) % s.height(), (v + s.width() / 2) % s.width()) = s(u, v);
    }
  }
  return out;
}

inline Spectrum shift_to_natural(const Spectrum& s) {
  Spectrum out(s.height(), s.width());
  for (std::size_t u = 0; u < s.height(); ++u) {
    for (std::size_t v = 0; v < s.width(); ++v) {
      out(u, v) = s((u + s.height() / 2) % s.height(), (v + s.width() / 2) % s.width());
    }
  }
  return out;
}

inline double max_abs_error(const Spectrum& a, const Spectrum& b) {
  double err = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a.values()[i] - b.values()[i]));
  return err;
}

}  // namespace cafda::check
