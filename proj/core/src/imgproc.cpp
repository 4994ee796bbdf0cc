#include "cafda/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace cafda::imgproc {

std::ptrdiff_t border_index(std::ptrdiff_t i, std::ptrdiff_t n, Border border) noexcept {
  if (i >= 0 && i < n) return i;
  switch (border) {
    case Border::kZero:
      return -1;
    case Border::kClamp:
      return std::clamp<std::ptrdiff_t>(i, 0, n - 1);
    case Border::kReflect: {
      const std::ptrdiff_t period = 2 * n;
      std::ptrdiff_t j = ((i % period) + period) % period;
      return j < n ? j : period - 1 - j;
    }
    case Border::kReflect101: {
      if (n == 1) return 0;
      const std::ptrdiff_t period = 2 * n - 2;
      std::ptrdiff_t j = ((i % period) + period) % period;
      return j < n ? j : period - j;
    }
  }
  return -1;
}

Affine Affine::rotation(double degrees, std::size_t height, std::size_t width) {
  const double theta = degrees * std::numbers::pi / 180.0;
  const double cs = std::cos(theta);
  const double sn = std::sin(theta);
  const double cx = (static_cast<double>(width) - 1.0) / 2.0;
  const double cy = (static_cast<double>(height) - 1.0) / 2.0;
  // Counter-clockwise on screen (y down): sample the source at R(-theta).
  Affine m;
  m.a = cs;
  m.b = -sn;
  m.d = sn;
  m.e = cs;
  m.c = cx - cs * cx + sn * cy;
  m.f = cy - sn * cx - cs * cy;
  return m;
}

double sample_bilinear(const Plane& src, double x, double y, Border border) noexcept {
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  const auto w = static_cast<std::ptrdiff_t>(src.width());
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto x0 = static_cast<std::ptrdiff_t>(fx);
  const auto y0 = static_cast<std::ptrdiff_t>(fy);
  const double tx = x - fx;
  const double ty = y - fy;
  auto at = [&](std::ptrdiff_t yy, std::ptrdiff_t xx) -> double {
    const std::ptrdiff_t ry = border_index(yy, h, border);
    const std::ptrdiff_t rx = border_index(xx, w, border);
    if (ry < 0 || rx < 0) return 0.0;
    return src(static_cast<std::size_t>(ry), static_cast<std::size_t>(rx));
  };
  // Exact pass-through on integer coordinates.
  if (tx == 0.0 && ty == 0.0) return at(y0, x0);
  const double top = (1.0 - tx) * at(y0, x0) + tx * at(y0, x0 + 1);
  const double bottom = (1.0 - tx) * at(y0 + 1, x0) + tx * at(y0 + 1, x0 + 1);
  return (1.0 - ty) * top + ty * bottom;
}

namespace {

void warp_planes(std::span<const Plane* const> src, std::span<Plane* const> dst, const Affine& map,
                 Border border) {
  const std::size_t h = src[0]->height();
  const std::size_t w = src[0]->width();
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double xs = map.a * static_cast<double>(x) + map.b * static_cast<double>(y) + map.c;
      const double ys = map.d * static_cast<double>(x) + map.e * static_cast<double>(y) + map.f;
      const double fx = std::floor(xs);
      const double fy = std::floor(ys);
      const double tx = xs - fx;
      const double ty = ys - fy;
      const bool interior = fx >= 0.0 && fy >= 0.0 && fx + 1.0 < static_cast<double>(w) &&
                            fy + 1.0 < static_cast<double>(h) && !(tx == 0.0 && ty == 0.0);
      if (!interior) {
        for (std::size_t c = 0; c < src.size(); ++c) (*dst[c])(y, x) = sample_bilinear(*src[c], xs, ys, border);
        continue;
      }
      const auto i = static_cast<std::size_t>(fy) * w + static_cast<std::size_t>(fx);
      for (std::size_t c = 0; c < src.size(); ++c) {
        const double* v = src[c]->data();
        const double top = (1.0 - tx) * v[i] + tx * v[i + 1];
        const double bottom = (1.0 - tx) * v[i + w] + tx * v[i + w + 1];
        dst[c]->data()[y * w + x] = (1.0 - ty) * top + ty * bottom;
      }
    }
  }
}

}  // namespace

Plane warp_bilinear(const Plane& src, const Affine& map, Border border) {
  if (map.is_identity()) return src;
  Plane out(src.height(), src.width());
  const Plane* in[] = {&src};
  Plane* res[] = {&out};
  warp_planes(in, res, map, border);
  return out;
}

Image warp_bilinear(const Image& src, const Affine& map, Border border) {
  if (map.is_identity()) return src;
  std::vector<Plane> planes(src.channels(), Plane(src.height(), src.width()));
  std::vector<const Plane*> in;
  std::vector<Plane*> res;
  for (std::size_t c = 0; c < src.channels(); ++c) {
    in.push_back(&src.channel(c));
    res.push_back(&planes[c]);
  }
  warp_planes(in, res, map, border);
  return Image(std::move(planes));
}

Mask warp_nearest(const Mask& src, const Affine& map) {
  if (map.is_identity()) return src;
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  const auto w = static_cast<std::ptrdiff_t>(src.width());
  Mask out(src.height(), src.width(), 0);
  for (std::size_t y = 0; y < src.height(); ++y) {
    for (std::size_t x = 0; x < src.width(); ++x) {
      const double xs = map.a * static_cast<double>(x) + map.b * static_cast<double>(y) + map.c;
      const double ys = map.d * static_cast<double>(x) + map.e * static_cast<double>(y) + map.f;
      const auto xi = static_cast<std::ptrdiff_t>(std::floor(xs + 0.5));
      const auto yi = static_cast<std::ptrdiff_t>(std::floor(ys + 0.5));
      if (xi >= 0 && xi < w && yi >= 0 && yi < h) {
        out(y, x) = src(static_cast<std::size_t>(yi), static_cast<std::size_t>(xi));
      }
    }
  }
  return out;
}

Plane resize_bilinear(const Plane& src, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw ValidationError("resize: target dimensions must be positive");
  if (src.height() == height && src.width() == width) return src;
  Plane out(height, width);
  const double sy = static_cast<double>(src.height()) / static_cast<double>(height);
  const double sx = static_cast<double>(src.width()) / static_cast<double>(width);
  for (std::size_t y = 0; y < height; ++y) {
    const double ys = (static_cast<double>(y) + 0.5) * sy - 0.5;
    for (std::size_t x = 0; x < width; ++x) {
      const double xs = (static_cast<double>(x) + 0.5) * sx - 0.5;
      out(y, x) = sample_bilinear(src, xs, ys, Border::kClamp);
    }
  }
  return out;
}

Image resize_bilinear(const Image& src, std::size_t height, std::size_t width) {
  std::vector<Plane> planes;
  planes.reserve(src.channels());
  for (const auto& p : src.planes()) planes.push_back(resize_bilinear(p, height, width));
  return Image(std::move(planes));
}

Mask resize_nearest(const Mask& src, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0) throw ValidationError("resize: target dimensions must be positive");
  if (src.height() == height && src.width() == width) return src;
  Mask out(height, width);
  for (std::size_t y = 0; y < height; ++y) {
    const std::size_t ys = std::min(src.height() - 1, y * src.height() / height);
    for (std::size_t x = 0; x < width; ++x) {
      out(y, x) = src(ys, std::min(src.width() - 1, x * src.width() / width));
    }
  }
  return out;
}

namespace {

std::vector<double> gaussian_kernel(double sigma, double truncate) {
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(truncate * sigma));
  std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (std::ptrdiff_t i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    total += v;
  }
  for (auto& v : k) v /= total;
  return k;
}

}  // namespace

Plane gaussian_blur(const Plane& src, double sigma, Border border, double truncate) {
  if (!(sigma > 0.0)) return src;
  const std::vector<double> k = gaussian_kernel(sigma, truncate);
  const auto radius = static_cast<std::ptrdiff_t>(k.size() / 2);
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  const auto w = static_cast<std::ptrdiff_t>(src.width());

  // Border index tables, so the inner loops stay branch-free.
  std::vector<std::ptrdiff_t> col_idx(static_cast<std::size_t>(w + 2 * radius));
  for (std::ptrdiff_t i = -radius; i < w + radius; ++i) {
    col_idx[static_cast<std::size_t>(i + radius)] = border_index(i, w, border);
  }
  std::vector<std::ptrdiff_t> row_idx(static_cast<std::size_t>(h + 2 * radius));
  for (std::ptrdiff_t i = -radius; i < h + radius; ++i) {
    row_idx[static_cast<std::size_t>(i + radius)] = border_index(i, h, border);
  }

  Plane tmp(src.height(), src.width());
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    auto in = src.row(static_cast<std::size_t>(y));
    auto out = tmp.row(static_cast<std::size_t>(y));
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(k.size()); ++t) {
        const std::ptrdiff_t xi = col_idx[static_cast<std::size_t>(x + t)];
        if (xi >= 0) acc += k[static_cast<std::size_t>(t)] * in[static_cast<std::size_t>(xi)];
      }
      out[static_cast<std::size_t>(x)] = acc;
    }
  }
  Plane out(src.height(), src.width(), 0.0);
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    auto dst = out.row(static_cast<std::size_t>(y));
    for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(k.size()); ++t) {
      const std::ptrdiff_t yi = row_idx[static_cast<std::size_t>(y + t)];
      if (yi < 0) continue;
      const double kv = k[static_cast<std::size_t>(t)];
      auto in = tmp.row(static_cast<std::size_t>(yi));
      for (std::size_t x = 0; x < dst.size(); ++x) dst[x] += kv * in[x];
    }
  }
  return out;
}

Plane filter2d(const Plane& src, const Plane& kernel, Border border) {
  if (kernel.height() % 2 == 0 || kernel.width() % 2 == 0) {
    throw ValidationError("filter2d: kernel dimensions must be odd");
  }
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  const auto w = static_cast<std::ptrdiff_t>(src.width());
  const auto ry = static_cast<std::ptrdiff_t>(kernel.height() / 2);
  const auto rx = static_cast<std::ptrdiff_t>(kernel.width() / 2);
  Plane out(src.height(), src.width(), 0.0);
  for (std::ptrdiff_t ky = -ry; ky <= ry; ++ky) {
    for (std::ptrdiff_t kx = -rx; kx <= rx; ++kx) {
      const double kv = kernel(static_cast<std::size_t>(ky + ry), static_cast<std::size_t>(kx + rx));
      if (kv == 0.0) continue;
      for (std::ptrdiff_t y = 0; y < h; ++y) {
        const std::ptrdiff_t yi = border_index(y + ky, h, border);
        if (yi < 0) continue;
        auto in = src.row(static_cast<std::size_t>(yi));
        auto dst = out.row(static_cast<std::size_t>(y));
        for (std::ptrdiff_t x = 0; x < w; ++x) {
          const std::ptrdiff_t xi = border_index(x + kx, w, border);
          if (xi >= 0) dst[static_cast<std::size_t>(x)] += kv * in[static_cast<std::size_t>(xi)];
        }
      }
    }
  }
  return out;
}

}  // namespace cafda::imgproc
