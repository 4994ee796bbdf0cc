#include "cafda/grid.hpp"

#include <algorithm>

namespace cafda::instrument {

namespace {
thread_local BufferStats tls_stats;
}  // namespace

BufferStats thread_buffer_stats() noexcept { return tls_stats; }

void reset_thread_peak() noexcept { tls_stats.peak = tls_stats.live; }

namespace detail {

void on_acquire() noexcept {
  ++tls_stats.live;
  tls_stats.peak = std::max(tls_stats.peak, tls_stats.live);
}

void on_release() noexcept { --tls_stats.live; }

}  // namespace detail
}  // namespace cafda::instrument
