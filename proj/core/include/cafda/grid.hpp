#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cafda/error.hpp"

namespace cafda {

namespace instrument {

/// Per-thread count of live pixel buffers. Every non-empty Grid owns one.
struct BufferStats {
  std::int64_t live = 0;
  std::int64_t peak = 0;
};

BufferStats thread_buffer_stats() noexcept;

/// Resets the calling thread's peak to its current live count.
void reset_thread_peak() noexcept;

namespace detail {
void on_acquire() noexcept;
void on_release() noexcept;
}  // namespace detail

}  // namespace instrument

namespace detail {

class BufferToken {
 public:
  BufferToken() = default;
  explicit BufferToken(bool active) : active_(active) {
    if (active_) instrument::detail::on_acquire();
  }
  BufferToken(const BufferToken& other) : BufferToken(other.active_) {}
  BufferToken(BufferToken&& other) noexcept : active_(other.active_) { other.active_ = false; }
  BufferToken& operator=(const BufferToken& other) {
    if (this != &other) {
      release();
      active_ = other.active_;
      if (active_) instrument::detail::on_acquire();
    }
    return *this;
  }
  BufferToken& operator=(BufferToken&& other) noexcept {
    if (this != &other) {
      release();
      active_ = other.active_;
      other.active_ = false;
    }
    return *this;
  }
  ~BufferToken() { release(); }

 private:
  void release() noexcept {
    if (active_) instrument::detail::on_release();
    active_ = false;
  }
  bool active_ = false;
};

}  // namespace detail

/// Dense row-major H x W grid.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(std::size_t height, std::size_t width, T fill = T{})
      : height_(height), width_(width), data_(height * width, fill), token_(height * width > 0) {}
  Grid(std::size_t height, std::size_t width, std::vector<T> values)
      : height_(height), width_(width), data_(std::move(values)), token_(height * width > 0) {
    if (data_.size() != height_ * width_) {
      throw ValidationError("grid: value count does not match dimensions");
    }
  }

  std::size_t height() const noexcept { return height_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t row, std::size_t col) noexcept { return data_[row * width_ + col]; }
  const T& operator()(std::size_t row, std::size_t col) const noexcept {
    return data_[row * width_ + col];
  }

  std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * width_, width_}; }
  std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * width_, width_}; }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  bool same_shape(const Grid& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return height_ == other.height() && width_ == other.width();
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.height_ == b.height_ && a.width_ == b.width_ && a.data_ == b.data_;
  }

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<T> data_;
  detail::BufferToken token_;
};

using Complex = std::complex<double>;

/// Real-valued H x W grid (one image channel, an amplitude or a phase map).
using Plane = Grid<double>;

/// Complex H x W grid, DC-centered: zero frequency sits at (H/2, W/2).
using Spectrum = Grid<Complex>;

/// Segmentation labels, 0 = background.
using Mask = Grid<std::uint8_t>;

template <typename T, typename U>
void require_same_shape(const Grid<T>& a, const Grid<U>& b, const char* what) {
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ValidationError(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a.height()) + "x" + std::to_string(a.width()) + " vs " +
                          std::to_string(b.height()) + "x" + std::to_string(b.width()) + ")");
  }
}

}  // namespace cafda
