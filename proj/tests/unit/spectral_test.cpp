#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "cafda/image.hpp"
#include "cafda/rng.hpp"
#include "cafda/spectral.hpp"
#include "naive_dft.hpp"

using namespace cafda;

namespace {

Plane random_plane(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  Plane p(h, w);
  for (double& v : p.values()) v = rng.uniform();
  return p;
}

}  // namespace

TEST(ForwardDft, ConstantChannelHasOnlyDc) {
  const Spectrum s = forward_dft(Plane(4, 4, 0.5));
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const double expected = (r == 2 && c == 2) ? 8.0 : 0.0;
      EXPECT_NEAR(std::abs(s(r, c)), expected, 1e-12);
    }
  }
}

TEST(ForwardDft, ImpulseHasFlatAmplitude) {
  Plane p(4, 4, 0.0);
  p(1, 2) = 1.0;
  const auto polar = decompose(forward_dft(p));
  for (double a : polar.amplitude.values()) EXPECT_NEAR(a, 1.0, 1e-12);
}

TEST(ForwardDft, MatchesNaiveOracleCentered) {
  const Plane p = random_plane(8, 8, 3);
  const Spectrum expected = check::shift_to_center(check::naive_dft_2d(check::to_complex(p), false));
  EXPECT_LT(check::max_abs_error(forward_dft(p), expected), 1e-5);
}

TEST(ForwardDft, OddSizesCenterAtFloorHalf) {
  const Spectrum s = forward_dft(Plane(5, 7, 1.0));
  EXPECT_NEAR(s(2, 3).real(), 35.0, 1e-12);
}

TEST(ForwardDft, RejectsNonFinite) {
  Plane p(3, 3, 0.1);
  p(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(forward_dft(p), ValidationError);
  p(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(forward_dft(p), ValidationError);
}

TEST(InverseDft, DcOnlyGivesConstant) {
  Spectrum s(6, 4);
  s(3, 2) = 24.0 * 0.3;
  const Plane out = inverse_dft(s);
  for (double v : out.values()) EXPECT_NEAR(v, 0.3, 1e-15);
}

TEST(InverseDft, MatchesNaiveInverseOracle) {
  const Plane p = random_plane(9, 6, 4);
  Spectrum s = forward_dft(p);
  // Perturb while keeping Hermitian symmetry so the inverse stays real.
  Rng rng(8);
  Spectrum natural = uncenter_spectrum(s);
  for (std::size_t u = 0; u < 9; ++u) {
    for (std::size_t v = 0; v < 6; ++v) {
      const double scale = 1.0 + 0.1 * rng.uniform();
      natural(u, v) *= scale;
      natural((9 - u) % 9, (6 - v) % 6) = std::conj(natural(u, v));
    }
  }
  natural(0, 0) = natural(0, 0).real();
  natural(0, 3) = natural(0, 3).real();
  s = center_spectrum(natural);
  const Spectrum ref = check::naive_dft_2d(natural, true);
  const Plane out = inverse_dft_unclamped(s);
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out.values()[i], ref.values()[i].real(), 1e-5);
}

TEST(InverseDft, ClampsToUnitRange) {
  Spectrum s(2, 2);
  s(1, 1) = 4.0 * 1.7;
  const Plane clamped = inverse_dft(s);
  const Plane raw = inverse_dft_unclamped(s);
  for (double v : clamped.values()) EXPECT_EQ(v, 1.0);
  for (double v : raw.values()) EXPECT_NEAR(v, 1.7, 1e-15);
}

TEST(Spectral, RoundTripWithinTolerance) {
  for (auto [h, w] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 3}, {17, 5}, {64, 64}, {45, 30}}) {
    const Plane p = random_plane(h, w, h * w);
    EXPECT_LT(max_abs_diff(inverse_dft(forward_dft(p)), p), 1e-4) << h << "x" << w;
  }
}

TEST(Spectral, Parseval) {
  const Plane p = random_plane(12, 20, 9);
  double space = 0.0, freq = 0.0;
  for (double v : p.values()) space += v * v;
  const Spectrum spec = forward_dft(p);
  for (const Complex& z : spec.values()) freq += std::norm(z);
  EXPECT_LT(std::abs(space - freq / 240.0) / space, 1e-5);
}

TEST(Spectral, Linearity) {
  const Plane x = random_plane(10, 10, 1);
  const Plane y = random_plane(10, 10, 2);
  Plane mix(10, 10);
  for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = 0.3 * x.values()[i] + 0.6 * y.values()[i];
  const Spectrum fx = forward_dft(x), fy = forward_dft(y), fm = forward_dft(mix);
  for (std::size_t i = 0; i < fm.size(); ++i) {
    EXPECT_LT(std::abs(fm.values()[i] - (0.3 * fx.values()[i] + 0.6 * fy.values()[i])), 1e-5);
  }
}

TEST(Decompose, AnalyticBins) {
  Spectrum s(1, 3);
  s(0, 0) = {3.0, 4.0};
  s(0, 1) = 0.0;
  s(0, 2) = {-1.0, -0.0};
  const auto polar = decompose(s);
  EXPECT_DOUBLE_EQ(polar.amplitude(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(polar.phase(0, 0), std::atan2(4.0, 3.0));
  EXPECT_EQ(polar.amplitude(0, 1), 0.0);
  EXPECT_EQ(polar.phase(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(polar.phase(0, 2), std::numbers::pi);
}

TEST(Decompose, RoundTripRandomSpectrum) {
  Rng rng(12);
  Spectrum s(7, 9);
  for (auto& z : s.values()) z = {rng.uniform(-50, 50), rng.uniform(-50, 50)};
  const auto polar = decompose(s);
  for (double p : polar.phase.values()) {
    EXPECT_GT(p, -std::numbers::pi);
    EXPECT_LE(p, std::numbers::pi);
  }
  EXPECT_LT(check::max_abs_error(recompose(polar.amplitude, polar.phase), s), 1e-6);
}

TEST(Recompose, AnalyticAndErrors) {
  Plane a(1, 2, 5.0), p(1, 2, std::atan2(4.0, 3.0));
  const Spectrum s = recompose(a, p);
  EXPECT_NEAR(s(0, 0).real(), 3.0, 1e-12);
  EXPECT_NEAR(s(0, 0).imag(), 4.0, 1e-12);
  EXPECT_THROW(recompose(Plane(2, 2, 1.0), Plane(2, 3, 0.0)), ValidationError);
  a(0, 1) = -1.0;
  EXPECT_THROW(recompose(a, p), ValidationError);
}

TEST(CenterSpectrum, InverseOfUncenter) {
  Rng rng(1);
  Spectrum s(5, 6);
  for (auto& z : s.values()) z = rng.uniform();
  EXPECT_EQ(uncenter_spectrum(center_spectrum(s)), s);
  EXPECT_EQ(center_spectrum(s), check::shift_to_center(s));
}
