#include "cafda/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "cafda/error.hpp"

namespace cafda::fft {

namespace {

constexpr std::size_t kMaxMixedRadixPrime = 61;

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> out;
  std::size_t p = 4;
  const auto floor_sqrt = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  do {
    while (n % p != 0) {
      switch (p) {
        case 4: p = 2; break;
        case 2: p = 3; break;
        default: p += 2; break;
      }
      if (p > floor_sqrt) p = n;
    }
    n /= p;
    out.push_back(p);
    out.push_back(n);
  } while (n > 1);
  return out;
}

std::vector<Complex> make_twiddles(std::size_t n, double sign) {
  std::vector<Complex> tw(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = sign * 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    tw[i] = {std::cos(phase), std::sin(phase)};
  }
  return tw;
}

std::vector<Complex>& scratch(std::size_t n) {
  thread_local std::vector<Complex> buffer;
  if (buffer.size() < n) buffer.resize(n);
  return buffer;
}

void butterfly2(Complex* out, std::size_t fstride, const Complex* tw, std::size_t m) {
  Complex* out2 = out + m;
  for (std::size_t k = 0; k < m; ++k) {
    const Complex t = out2[k] * tw[k * fstride];
    out2[k] = out[k] - t;
    out[k] += t;
  }
}

void butterfly3(Complex* out, std::size_t fstride, const Complex* tw, std::size_t m) {
  const std::size_t m2 = 2 * m;
  const double epi3_imag = tw[fstride * m].imag();
  const Complex* tw1 = tw;
  const Complex* tw2 = tw;
  for (std::size_t k = m; k > 0; --k, ++out) {
    const Complex s1 = out[m] * *tw1;
    const Complex s2 = out[m2] * *tw2;
    const Complex s3 = s1 + s2;
    Complex s0 = s1 - s2;
    tw1 += fstride;
    tw2 += 2 * fstride;
    out[m] = out[0] - s3 * 0.5;
    s0 *= epi3_imag;
    out[0] += s3;
    out[m2] = {out[m].real() + s0.imag(), out[m].imag() - s0.real()};
    out[m] = {out[m].real() - s0.imag(), out[m].imag() + s0.real()};
  }
}

void butterfly4(Complex* out, std::size_t fstride, const Complex* tw, std::size_t m, bool inverse) {
  const std::size_t m2 = 2 * m;
  const std::size_t m3 = 3 * m;
  const Complex* tw1 = tw;
  const Complex* tw2 = tw;
  const Complex* tw3 = tw;
  for (std::size_t k = m; k > 0; --k, ++out) {
    const Complex s0 = out[m] * *tw1;
    const Complex s1 = out[m2] * *tw2;
    const Complex s2 = out[m3] * *tw3;
    const Complex s5 = out[0] - s1;
    out[0] += s1;
    const Complex s3 = s0 + s2;
    const Complex s4 = s0 - s2;
    out[m2] = out[0] - s3;
    tw1 += fstride;
    tw2 += 2 * fstride;
    tw3 += 3 * fstride;
    out[0] += s3;
    if (inverse) {
      out[m] = {s5.real() - s4.imag(), s5.imag() + s4.real()};
      out[m3] = {s5.real() + s4.imag(), s5.imag() - s4.real()};
    } else {
      out[m] = {s5.real() + s4.imag(), s5.imag() - s4.real()};
      out[m3] = {s5.real() - s4.imag(), s5.imag() + s4.real()};
    }
  }
}

void butterfly_generic(Complex* out, std::size_t fstride, const Complex* tw, std::size_t m,
                       std::size_t p, std::size_t n) {
  std::vector<Complex>& tmp = scratch(p);
  for (std::size_t u = 0; u < m; ++u) {
    std::size_t k = u;
    for (std::size_t q = 0; q < p; ++q, k += m) tmp[q] = out[k];
    k = u;
    for (std::size_t q1 = 0; q1 < p; ++q1, k += m) {
      std::size_t twidx = 0;
      Complex acc = tmp[0];
      for (std::size_t q = 1; q < p; ++q) {
        twidx += fstride * k;
        twidx %= n;
        acc += tmp[q] * tw[twidx];
      }
      out[k] = acc;
    }
  }
}

}  // namespace

Plan::Plan(std::size_t n) : n_(n) {
  if (n == 0) throw ValidationError("fft: length must be positive");
  factors_ = factorize(n);
  std::size_t largest = 1;
  for (std::size_t i = 0; i < factors_.size(); i += 2) largest = std::max(largest, factors_[i]);
  if (largest > kMaxMixedRadixPrime) {
    bluestein_ = true;
    std::size_t padded = 1;
    while (padded < 2 * n - 1) padded <<= 1;
    pow2_ = Plan::get(padded);
    chirp_.resize(n);
    const std::size_t two_n = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
      // k^2 mod 2n keeps the phase argument small for large k.
      const std::size_t k2 = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * k) % two_n);
      const double phase = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
      chirp_[k] = {std::cos(phase), std::sin(phase)};
    }
    std::vector<Complex> kernel(padded, Complex{});
    kernel[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k) {
      kernel[k] = std::conj(chirp_[k]);
      kernel[padded - k] = std::conj(chirp_[k]);
    }
    kernel_fft_.resize(padded);
    pow2_->execute(kernel.data(), 1, kernel_fft_.data(), Direction::kForward);
    factors_.clear();
  } else {
    twiddles_fwd_ = make_twiddles(n, -1.0);
    twiddles_inv_ = make_twiddles(n, 1.0);
  }
}

std::shared_ptr<const Plan> Plan::get(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  // Built outside the lock: Bluestein plans recursively request a pow2 plan.
  auto plan = std::make_shared<const Plan>(n);
  std::lock_guard lock(mutex);
  return cache.emplace(n, std::move(plan)).first->second;
}

void Plan::work(Complex* out, const Complex* in, std::size_t fstride, std::size_t in_stride,
                const std::size_t* factors, const std::vector<Complex>& twiddles) const {
  const std::size_t p = factors[0];
  const std::size_t m = factors[1];
  Complex* const begin = out;
  Complex* const end = out + p * m;
  if (m == 1) {
    for (; out != end; ++out, in += fstride * in_stride) *out = *in;
  } else {
    for (; out != end; out += m, in += fstride * in_stride) {
      work(out, in, fstride * p, in_stride, factors + 2, twiddles);
    }
  }
  out = begin;
  const Complex* tw = twiddles.data();
  switch (p) {
    case 2: butterfly2(out, fstride, tw, m); break;
    case 3: butterfly3(out, fstride, tw, m); break;
    case 4: butterfly4(out, fstride, tw, m, &twiddles == &twiddles_inv_); break;
    default: butterfly_generic(out, fstride, tw, m, p, n_); break;
  }
}

void Plan::execute_bluestein(const Complex* in, std::size_t in_stride, Complex* out,
                             Direction dir) const {
  const std::size_t padded = pow2_->size();
  std::vector<Complex> a(padded, Complex{});
  const bool inverse = dir == Direction::kInverse;
  // The inverse is conj(forward(conj(x))).
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex x = inverse ? std::conj(in[k * in_stride]) : in[k * in_stride];
    a[k] = x * chirp_[k];
  }
  std::vector<Complex> spectrum(padded);
  pow2_->execute(a.data(), 1, spectrum.data(), Direction::kForward);
  for (std::size_t k = 0; k < padded; ++k) spectrum[k] *= kernel_fft_[k];
  pow2_->execute(spectrum.data(), 1, a.data(), Direction::kInverse);
  const double scale = 1.0 / static_cast<double>(padded);
  for (std::size_t k = 0; k < n_; ++k) {
    const Complex y = a[k] * scale * chirp_[k];
    out[k] = inverse ? std::conj(y) : y;
  }
}

void Plan::execute(const Complex* in, std::size_t in_stride, Complex* out, Direction dir) const {
  if (bluestein_) {
    execute_bluestein(in, in_stride, out, dir);
    return;
  }
  if (n_ == 1) {
    out[0] = in[0];
    return;
  }
  work(out, in, 1, in_stride, factors_.data(),
       dir == Direction::kForward ? twiddles_fwd_ : twiddles_inv_);
}

void transform_2d(Spectrum& grid, Direction dir) {
  const std::size_t height = grid.height();
  const std::size_t width = grid.width();
  if (height == 0 || width == 0) return;
  const auto row_plan = Plan::get(width);
  const auto col_plan = Plan::get(height);
  std::vector<Complex> buffer(std::max(height, width));
  Complex* data = grid.data();
  for (std::size_t r = 0; r < height; ++r) {
    Complex* row = data + r * width;
    row_plan->execute(row, 1, buffer.data(), dir);
    std::copy_n(buffer.data(), width, row);
  }
  for (std::size_t c = 0; c < width; ++c) {
    col_plan->execute(data + c, width, buffer.data(), dir);
    for (std::size_t r = 0; r < height; ++r) data[r * width + c] = buffer[r];
  }
}

}  // namespace cafda::fft
