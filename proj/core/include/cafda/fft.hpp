#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "cafda/grid.hpp"

namespace cafda::fft {

enum class Direction { kForward, kInverse };

/// Unnormalized 1-D complex DFT of a fixed length. Any length >= 1 is
/// accepted: lengths whose prime factors are all <= 61 run mixed-radix
/// (radix 4, 2, 3 butterflies plus a generic prime butterfly); others go
/// through Bluestein's chirp-z convolution on a power-of-two grid.
///
/// Forward computes X[k] = sum_n x[n] exp(-2 pi i k n / N); inverse uses the
/// conjugate kernel. Neither direction scales.
class Plan {
 public:
  explicit Plan(std::size_t n);

  /// Shared, immutable plan for length n; safe to use from any thread.
  static std::shared_ptr<const Plan> get(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  /// Reads n values from `in` at element stride `in_stride` and writes the
  /// transform contiguously to `out`. `in` and `out` must not overlap.
  void execute(const Complex* in, std::size_t in_stride, Complex* out, Direction dir) const;

 private:
  void work(Complex* out, const Complex* in, std::size_t fstride, std::size_t in_stride,
            const std::size_t* factors, const std::vector<Complex>& twiddles) const;
  void execute_bluestein(const Complex* in, std::size_t in_stride, Complex* out,
                         Direction dir) const;

  std::size_t n_;
  std::vector<std::size_t> factors_;  // (radix, remaining length) pairs
  std::vector<Complex> twiddles_fwd_;
  std::vector<Complex> twiddles_inv_;

  // Bluestein state, used when the length has a large prime factor.
  bool bluestein_ = false;
  std::vector<Complex> chirp_;       // exp(-i pi k^2 / n)
  std::vector<Complex> kernel_fft_;  // FFT of the conjugate chirp, padded
  std::shared_ptr<const Plan> pow2_;
};

/// In-place unnormalized 2-D transform of a row-major grid (natural
/// ordering, DC at (0,0)).
void transform_2d(Spectrum& grid, Direction dir);

}  // namespace cafda::fft
