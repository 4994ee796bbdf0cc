#pragma once

#include "cafda/grid.hpp"

namespace cafda {

// Conventions shared by every function here:
//  * forward transform is unnormalized, inverse carries the 1/(H*W) factor,
//    so sum |x|^2 == sum |F|^2 / (H*W);
//  * spectra are DC-centered: frequency (0,0) sits at row H/2, column W/2
//    (integer division), frequency (u,v) at ((u + H/2) mod H, (v + W/2) mod W).

/// DC-centered spectrum of one real channel. Non-finite input is rejected.
Spectrum forward_dft(const Plane& channel);

/// Real part of the inverse transform, clamped to [0,1]. The imaginary
/// residue is discarded.
Plane inverse_dft(const Spectrum& spectrum);

/// Real part of the inverse transform without clamping.
Plane inverse_dft_unclamped(const Spectrum& spectrum);

struct PolarSpectrum {
  Plane amplitude;  ///< |s|, non-negative
  Plane phase;      ///< arg(s) in (-pi, pi]; 0 for a zero bin
};

PolarSpectrum decompose(const Spectrum& spectrum);

/// amplitude * exp(i * phase), elementwise. Amplitudes must be finite and >= 0.
Spectrum recompose(const Plane& amplitude, const Plane& phase);

/// Moves DC from (0,0) to (H/2, W/2).
Spectrum center_spectrum(const Spectrum& natural);

/// Inverse of center_spectrum.
Spectrum uncenter_spectrum(const Spectrum& centered);

}  // namespace cafda
