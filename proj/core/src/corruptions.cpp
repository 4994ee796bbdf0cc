#include "cafda/corruptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <json.hpp>

#include "cafda/corruption_constants.hpp"
#include "cafda/imgproc.hpp"
#include "cafda/io.hpp"
#include "cafda/parallel.hpp"

namespace cafda {

namespace cc = corruption_constants;
using imgproc::Border;

std::string_view to_string(CorruptionKind kind) noexcept {
  switch (kind) {
    case CorruptionKind::kGaussianNoise: return "gaussian_noise";
    case CorruptionKind::kShotNoise: return "shot_noise";
    case CorruptionKind::kImpulseNoise: return "impulse_noise";
    case CorruptionKind::kDefocusBlur: return "defocus_blur";
    case CorruptionKind::kGlassBlur: return "glass_blur";
    case CorruptionKind::kMotionBlur: return "motion_blur";
    case CorruptionKind::kZoomBlur: return "zoom_blur";
    case CorruptionKind::kSnow: return "snow";
    case CorruptionKind::kFrost: return "frost";
    case CorruptionKind::kFog: return "fog";
    case CorruptionKind::kBrightness: return "brightness";
    case CorruptionKind::kContrast: return "contrast";
    case CorruptionKind::kElastic: return "elastic";
    case CorruptionKind::kPixelate: return "pixelate";
    case CorruptionKind::kJpeg: return "jpeg";
  }
  return "unknown";
}

std::optional<CorruptionKind> parse_corruption_kind(std::string_view name) noexcept {
  for (CorruptionKind kind : kAllCorruptions) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string_view corruption_group(CorruptionKind kind) noexcept {
  switch (kind) {
    case CorruptionKind::kGaussianNoise:
    case CorruptionKind::kShotNoise:
    case CorruptionKind::kImpulseNoise:
      return "noise";
    case CorruptionKind::kDefocusBlur:
    case CorruptionKind::kGlassBlur:
    case CorruptionKind::kMotionBlur:
    case CorruptionKind::kZoomBlur:
      return "blur";
    case CorruptionKind::kSnow:
    case CorruptionKind::kFrost:
    case CorruptionKind::kFog:
    case CorruptionKind::kBrightness:
      return "weather";
    default:
      return "digital";
  }
}

void CorruptionSpec::validate() const {
  if (severity < 1 || severity > 5) {
    throw ValidationError("corruption severity must be in [1,5], got " + std::to_string(severity));
  }
  if (static_cast<std::size_t>(kind) >= kAllCorruptions.size()) {
    throw ValidationError("unknown corruption kind");
  }
}

namespace {

template <typename Fn>
Image map_planes(const Image& img, Fn&& fn) {
  std::vector<Plane> planes;
  planes.reserve(img.channels());
  for (const auto& p : img.planes()) planes.push_back(fn(p));
  return Image(std::move(planes));
}

// ---- noise ----------------------------------------------------------------

Image gaussian_noise(const Image& img, double sigma, Rng& rng) {
  Image out = img;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      for (std::size_t c = 0; c < img.channels(); ++c) out.at(y, x, c) += rng.normal(0.0, sigma);
    }
  }
  return out;
}

Image shot_noise(const Image& img, double photons, Rng& rng) {
  Image out = img;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      for (std::size_t c = 0; c < img.channels(); ++c) {
        out.at(y, x, c) = static_cast<double>(rng.poisson(img.at(y, x, c) * photons)) / photons;
      }
    }
  }
  return out;
}

Image impulse_noise(const Image& img, double amount, Rng& rng) {
  Image out = img;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      for (std::size_t c = 0; c < img.channels(); ++c) {
        const bool flipped = rng.uniform() < amount;
        const bool salt = rng.uniform() < 0.5;
        if (flipped) out.at(y, x, c) = salt ? 1.0 : 0.0;
      }
    }
  }
  return out;
}

// ---- blur -----------------------------------------------------------------

Plane defocus_kernel(int radius, double alias_sigma) {
  const int half = radius <= 8 ? 8 : radius;
  const int size = 2 * half + 1;
  Plane disk(static_cast<std::size_t>(size), static_cast<std::size_t>(size), 0.0);
  double total = 0.0;
  for (int y = -half; y <= half; ++y) {
    for (int x = -half; x <= half; ++x) {
      if (x * x + y * y <= radius * radius) {
        disk(static_cast<std::size_t>(y + half), static_cast<std::size_t>(x + half)) = 1.0;
        total += 1.0;
      }
    }
  }
  for (double& v : disk.values()) v /= total;
  // Anti-alias with a small fixed-size Gaussian (3 taps, or 5 for large disks).
  const int taps = radius <= 8 ? 3 : 5;
  Plane tap_kernel(1, static_cast<std::size_t>(taps));
  double tap_total = 0.0;
  for (int i = 0; i < taps; ++i) {
    const double d = i - taps / 2;
    tap_kernel(0, static_cast<std::size_t>(i)) = std::exp(-0.5 * d * d / (alias_sigma * alias_sigma));
    tap_total += tap_kernel(0, static_cast<std::size_t>(i));
  }
  for (double& v : tap_kernel.values()) v /= tap_total;
  Plane column(static_cast<std::size_t>(taps), 1);
  for (int i = 0; i < taps; ++i) column(static_cast<std::size_t>(i), 0) = tap_kernel(0, static_cast<std::size_t>(i));
  const Plane rows = imgproc::filter2d(disk, tap_kernel, Border::kReflect101);
  return imgproc::filter2d(rows, column, Border::kReflect101);
}

Image defocus_blur(const Image& img, const cc::Defocus& p) {
  const Plane kernel = defocus_kernel(p.radius, p.alias_sigma);
  return map_planes(img, [&](const Plane& plane) {
    return imgproc::filter2d(plane, kernel, Border::kReflect101);
  });
}

Image glass_blur(const Image& img, const cc::Glass& p, Rng& rng) {
  Image out = map_planes(img, [&](const Plane& plane) {
    return imgproc::gaussian_blur(plane, p.sigma, Border::kClamp);
  });
  const auto h = static_cast<std::ptrdiff_t>(img.height());
  const auto w = static_cast<std::ptrdiff_t>(img.width());
  const std::ptrdiff_t d = p.max_delta;
  for (int it = 0; it < p.iterations; ++it) {
    for (std::ptrdiff_t y = h - d; y > d; --y) {
      for (std::ptrdiff_t x = w - d; x > d; --x) {
        const std::ptrdiff_t dx = rng.uniform_int(-d, d - 1);
        const std::ptrdiff_t dy = rng.uniform_int(-d, d - 1);
        const std::ptrdiff_t yy = y + dy;
        const std::ptrdiff_t xx = x + dx;
        if (y >= h || x >= w || yy < 0 || yy >= h || xx < 0 || xx >= w) continue;
        for (std::size_t c = 0; c < img.channels(); ++c) {
          std::swap(out.at(static_cast<std::size_t>(y), static_cast<std::size_t>(x), c),
                    out.at(static_cast<std::size_t>(yy), static_cast<std::size_t>(xx), c));
        }
      }
    }
  }
  return map_planes(out, [&](const Plane& plane) {
    return imgproc::gaussian_blur(plane, p.sigma, Border::kClamp);
  });
}

// One-sided streak: taps i = 0..2r at integer offsets round(i*cos), round(i*sin),
// weighted exp(-i^2 / (2 sigma^2)); edges clamp.
Plane motion_blur_plane(const Plane& src, int radius, double sigma, double angle_degrees) {
  const int taps = 2 * radius + 1;
  const double theta = angle_degrees * std::numbers::pi / 180.0;
  std::vector<double> weight(static_cast<std::size_t>(taps));
  std::vector<std::ptrdiff_t> ox(static_cast<std::size_t>(taps));
  std::vector<std::ptrdiff_t> oy(static_cast<std::size_t>(taps));
  double total = 0.0;
  for (int i = 0; i < taps; ++i) {
    const auto k = static_cast<std::size_t>(i);
    weight[k] = std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));
    total += weight[k];
    ox[k] = static_cast<std::ptrdiff_t>(std::lround(i * std::cos(theta)));
    oy[k] = static_cast<std::ptrdiff_t>(std::lround(i * std::sin(theta)));
  }
  for (double& v : weight) v /= total;
  const auto h = static_cast<std::ptrdiff_t>(src.height());
  const auto w = static_cast<std::ptrdiff_t>(src.width());
  Plane out(src.height(), src.width(), 0.0);
  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      double acc = 0.0;
      for (std::size_t k = 0; k < weight.size(); ++k) {
        const auto yy = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(y + oy[k], 0, h - 1));
        const auto xx = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(x + ox[k], 0, w - 1));
        acc += weight[k] * src(yy, xx);
      }
      out(static_cast<std::size_t>(y), static_cast<std::size_t>(x)) = acc;
    }
  }
  return out;
}

Image motion_blur(const Image& img, const cc::Motion& p, Rng& rng) {
  const double angle = rng.uniform(-cc::kMotionAngleMaxDegrees, cc::kMotionAngleMaxDegrees);
  return map_planes(img, [&](const Plane& plane) {
    return motion_blur_plane(plane, p.radius, p.sigma, angle);
  });
}

// Center crop by 1/zoom, scaled back to full size.
Plane zoom_plane(const Plane& src, double zoom) {
  if (zoom == 1.0) return src;
  const double cx = (static_cast<double>(src.width()) - 1.0) / 2.0;
  const double cy = (static_cast<double>(src.height()) - 1.0) / 2.0;
  imgproc::Affine map{1.0 / zoom, 0.0, cx - cx / zoom, 0.0, 1.0 / zoom, cy - cy / zoom};
  return imgproc::warp_bilinear(src, map, Border::kClamp);
}

Image zoom_blur(const Image& img, const cc::ZoomRange& p) {
  std::vector<double> zooms;
  const auto count = static_cast<int>(std::ceil((p.stop - 1.0) / p.step - 1e-9));
  for (int i = 0; i < count; ++i) zooms.push_back(1.0 + i * p.step);
  return map_planes(img, [&](const Plane& plane) {
    Plane acc = plane;
    for (double z : zooms) {
      const Plane zoomed = zoom_plane(plane, z);
      auto dst = acc.values();
      auto src = zoomed.values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
    const double scale = 1.0 / static_cast<double>(zooms.size() + 1);
    for (double& v : acc.values()) v *= scale;
    return acc;
  });
}

// ---- weather --------------------------------------------------------------

Plane luminance(const Image& img) {
  if (img.channels() < 3) return img.channel(0);
  Plane out(img.height(), img.width());
  auto r = img.channel(0).values();
  auto g = img.channel(1).values();
  auto b = img.channel(2).values();
  auto dst = out.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 0.299 * r[i] + 0.587 * g[i] + 0.114 * b[i];
  return out;
}

Image snow(const Image& img, const cc::Snow& p, Rng& rng) {
  Plane layer(img.height(), img.width());
  for (double& v : layer.values()) v = rng.normal(p.mean, p.stddev);
  layer = zoom_plane(layer, p.zoom);
  for (double& v : layer.values()) v = v < p.threshold ? 0.0 : std::clamp(v, 0.0, 1.0);
  const double angle = rng.uniform(-135.0, -45.0);
  layer = motion_blur_plane(layer, p.blur_radius, p.blur_sigma, angle);

  const Plane gray = luminance(img);
  Image out = img;
  const std::size_t h = img.height();
  const std::size_t w = img.width();
  for (std::size_t c = 0; c < img.channels(); ++c) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double v = img.at(y, x, c);
        const double whitened = std::max(v, gray(y, x) * 1.5 + 0.5);
        // Streaks fall both ways: add the layer and its 180-degree rotation.
        out.at(y, x, c) = p.blend * v + (1.0 - p.blend) * whitened + layer(y, x) +
                          layer(h - 1 - y, w - 1 - x);
      }
    }
  }
  return out;
}

// Octave value noise with ridged crystalline veins, normalized to [0,1].
Plane procedural_frost(std::size_t height, std::size_t width, Rng& rng) {
  Plane tex(height, width, 0.0);
  const double side = static_cast<double>(std::max(height, width));
  double amplitude = 1.0;
  for (int octave = 0; octave < 5; ++octave) {
    const double cell = std::max(2.0, side / (4.0 * std::pow(2.0, octave)));
    const auto gh = static_cast<std::size_t>(std::ceil(static_cast<double>(height) / cell)) + 2;
    const auto gw = static_cast<std::size_t>(std::ceil(static_cast<double>(width) / cell)) + 2;
    Plane lattice(gh, gw);
    for (double& v : lattice.values()) v = rng.uniform();
    for (std::size_t y = 0; y < height; ++y) {
      for (std::size_t x = 0; x < width; ++x) {
        const double fy = static_cast<double>(y) / cell;
        const double fx = static_cast<double>(x) / cell;
        const auto iy = static_cast<std::size_t>(fy);
        const auto ix = static_cast<std::size_t>(fx);
        double ty = fy - static_cast<double>(iy);
        double tx = fx - static_cast<double>(ix);
        ty = ty * ty * (3.0 - 2.0 * ty);
        tx = tx * tx * (3.0 - 2.0 * tx);
        const double top = (1 - tx) * lattice(iy, ix) + tx * lattice(iy, ix + 1);
        const double bot = (1 - tx) * lattice(iy + 1, ix) + tx * lattice(iy + 1, ix + 1);
        const double n = (1 - ty) * top + ty * bot;
        const double ridge = 1.0 - std::abs(2.0 * n - 1.0);
        tex(y, x) += amplitude * ridge * ridge * ridge;
      }
    }
    amplitude *= 0.55;
  }
  const auto [lo, hi] = std::minmax_element(tex.values().begin(), tex.values().end());
  const double low = *lo;
  const double range = *hi - *lo;
  for (double& v : tex.values()) v = range > 0.0 ? (v - low) / range : 0.0;
  return tex;
}

Image frost(const Image& img, const cc::Frost& p, Rng& rng, const CorruptionAssets* assets) {
  Image texture;
  if (assets != nullptr && !assets->frost_textures.empty()) {
    const auto idx = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(assets->frost_textures.size()) - 1));
    Image src = assets->frost_textures[idx];
    if (src.height() < img.height() || src.width() < img.width()) {
      const double scale = std::max(static_cast<double>(img.height()) / static_cast<double>(src.height()),
                                    static_cast<double>(img.width()) / static_cast<double>(src.width()));
      src = imgproc::resize_bilinear(src, static_cast<std::size_t>(std::ceil(src.height() * scale)),
                                     static_cast<std::size_t>(std::ceil(src.width() * scale)));
    }
    const auto oy = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(src.height() - img.height())));
    const auto ox = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(src.width() - img.width())));
    texture = Image(img.height(), img.width(), img.channels());
    for (std::size_t c = 0; c < img.channels(); ++c) {
      const Plane& sp = src.channel(std::min(c, src.channels() - 1));
      for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) texture.at(y, x, c) = sp(y + oy, x + ox);
      }
    }
  } else {
    const Plane base = procedural_frost(img.height(), img.width(), rng);
    constexpr std::array<double, 3> tint = {0.82, 0.9, 1.0};
    texture = Image(img.height(), img.width(), img.channels());
    for (std::size_t c = 0; c < img.channels(); ++c) {
      const double t = img.channels() == 3 ? tint[c] : 0.9;
      auto dst = texture.channel(c).values();
      auto src = base.values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = t * src[i];
    }
  }
  Image out = img;
  for (std::size_t c = 0; c < img.channels(); ++c) {
    auto dst = out.channel(c).values();
    auto tex = texture.channel(c).values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = p.image_weight * dst[i] + p.frost_weight * tex[i];
  }
  return out;
}

// Diamond-square plasma on a 2^k grid, normalized to [0,1].
Plane plasma_fractal(std::size_t mapsize, double wibble_decay, Rng& rng) {
  Plane map(mapsize, mapsize, 0.0);
  std::size_t step = mapsize;
  double wibble = 100.0;
  auto wibbled_mean = [&](double sum) { return sum / 4.0 + wibble * rng.uniform(-wibble, wibble); };
  auto at = [&](std::size_t y, std::size_t x) -> double& { return map(y % mapsize, x % mapsize); };
  while (step >= 2) {
    const std::size_t half = step / 2;
    // Squares: centers from the four corners.
    for (std::size_t y = 0; y < mapsize; y += step) {
      for (std::size_t x = 0; x < mapsize; x += step) {
        const double sum = at(y, x) + at(y + step, x) + at(y, x + step) + at(y + step, x + step);
        map(y + half, x + half) = wibbled_mean(sum);
      }
    }
    // Diamonds: edge midpoints from neighbouring corners and centers.
    for (std::size_t y = 0; y < mapsize; y += step) {
      for (std::size_t x = 0; x < mapsize; x += step) {
        const std::size_t up = (y + mapsize - half) % mapsize;
        const double sum = at(y + half, x + half) + at(up, x + half) + at(y, x) + at(y, x + step);
        map(y, x + half) = wibbled_mean(sum);
      }
    }
    for (std::size_t y = 0; y < mapsize; y += step) {
      for (std::size_t x = 0; x < mapsize; x += step) {
        const std::size_t left = (x + mapsize - half) % mapsize;
        const double sum = at(y + half, x + half) + at(y + half, left) + at(y, x) + at(y + step, x);
        map(y + half, x) = wibbled_mean(sum);
      }
    }
    step /= 2;
    wibble /= wibble_decay;
  }
  const auto [lo, hi] = std::minmax_element(map.values().begin(), map.values().end());
  const double low = *lo;
  const double range = *hi - *lo;
  for (double& v : map.values()) v = range > 0.0 ? (v - low) / range : 0.0;
  return map;
}

Image fog(const Image& img, const cc::Fog& p, Rng& rng) {
  std::size_t mapsize = 2;
  while (mapsize < std::max(img.height(), img.width())) mapsize <<= 1;
  const Plane plasma = plasma_fractal(mapsize, p.wibble_decay, rng);
  double max_val = 0.0;
  for (const auto& plane : img.planes()) {
    for (double v : plane.values()) max_val = std::max(max_val, v);
  }
  Image out = img;
  const double scale = max_val / (max_val + p.strength);
  for (std::size_t c = 0; c < img.channels(); ++c) {
    for (std::size_t y = 0; y < img.height(); ++y) {
      for (std::size_t x = 0; x < img.width(); ++x) {
        out.at(y, x, c) = (img.at(y, x, c) + p.strength * plasma(y, x)) * scale;
      }
    }
  }
  return out;
}

// ---- digital --------------------------------------------------------------

Image contrast(const Image& img, double factor) {
  return map_planes(img, [&](const Plane& plane) {
    double mean = 0.0;
    for (double v : plane.values()) mean += v;
    mean /= static_cast<double>(plane.size());
    Plane out = plane;
    for (double& v : out.values()) v = (v - mean) * factor + mean;
    return out;
  });
}

// Affine fit mapping three source points onto three destination points.
imgproc::Affine affine_from_points(const std::array<std::array<double, 2>, 3>& from,
                                   const std::array<std::array<double, 2>, 3>& to) {
  // Solve [x y 1] * [a d; b e; c f] = [x' y'] for the three pairs.
  const double x0 = from[0][0], y0 = from[0][1];
  const double x1 = from[1][0], y1 = from[1][1];
  const double x2 = from[2][0], y2 = from[2][1];
  const double det = x0 * (y1 - y2) - y0 * (x1 - x2) + (x1 * y2 - x2 * y1);
  if (std::abs(det) < 1e-12) return imgproc::Affine::identity();
  auto solve = [&](double u0, double u1, double u2) {
    const double a = (u0 * (y1 - y2) - y0 * (u1 - u2) + (u1 * y2 - u2 * y1)) / det;
    const double b = (x0 * (u1 - u2) - u0 * (x1 - x2) + (x1 * u2 - x2 * u1)) / det;
    const double c = (x0 * (y1 * u2 - y2 * u1) - y0 * (x1 * u2 - x2 * u1) + u0 * (x1 * y2 - x2 * y1)) / det;
    return std::array<double, 3>{a, b, c};
  };
  const auto rx = solve(to[0][0], to[1][0], to[2][0]);
  const auto ry = solve(to[0][1], to[1][1], to[2][1]);
  return {rx[0], rx[1], rx[2], ry[0], ry[1], ry[2]};
}

imgproc::Affine invert(const imgproc::Affine& m) {
  const double det = m.a * m.e - m.b * m.d;
  if (std::abs(det) < 1e-12) return imgproc::Affine::identity();
  imgproc::Affine inv;
  inv.a = m.e / det;
  inv.b = -m.b / det;
  inv.d = -m.d / det;
  inv.e = m.a / det;
  inv.c = -(inv.a * m.c + inv.b * m.f);
  inv.f = -(inv.d * m.c + inv.e * m.f);
  return inv;
}

Image elastic(const Image& img, const cc::Elastic& p, Rng& rng) {
  const double side = static_cast<double>(std::min(img.height(), img.width()));
  const double alpha = p.alpha * side;
  const double sigma = p.sigma * side;
  const double jitter = p.affine * side;

  const double cx = std::floor(static_cast<double>(img.width()) / 2.0);
  const double cy = std::floor(static_cast<double>(img.height()) / 2.0);
  const double sq = std::floor(side / 3.0);
  const std::array<std::array<double, 2>, 3> pts1 = {
      {{cx + sq, cy + sq}, {cx + sq, cy - sq}, {cx - sq, cy - sq}}};
  auto pts2 = pts1;
  for (auto& pt : pts2) {
    for (double& v : pt) v += rng.uniform(-jitter, jitter);
  }
  const imgproc::Affine sample_map = invert(affine_from_points(pts1, pts2));
  const Image warped = imgproc::warp_bilinear(img, sample_map, Border::kReflect101);

  auto displacement = [&] {
    Plane field(img.height(), img.width());
    for (double& v : field.values()) v = rng.uniform(-1.0, 1.0);
    Plane smooth = imgproc::gaussian_blur(field, sigma, Border::kReflect, 3.0);
    for (double& v : smooth.values()) v *= alpha;
    return smooth;
  };
  const Plane dx = displacement();
  const Plane dy = displacement();
  return map_planes(warped, [&](const Plane& plane) {
    Plane out(plane.height(), plane.width());
    for (std::size_t y = 0; y < plane.height(); ++y) {
      for (std::size_t x = 0; x < plane.width(); ++x) {
        out(y, x) = imgproc::sample_bilinear(plane, static_cast<double>(x) + dx(y, x),
                                             static_cast<double>(y) + dy(y, x), Border::kReflect);
      }
    }
    return out;
  });
}

// Area-weighted average of [i*scale, (i+1)*scale) for each output index.
std::vector<std::vector<std::pair<std::size_t, double>>> box_weights(std::size_t src, std::size_t dst) {
  std::vector<std::vector<std::pair<std::size_t, double>>> out(dst);
  const double scale = static_cast<double>(src) / static_cast<double>(dst);
  for (std::size_t i = 0; i < dst; ++i) {
    const double lo = static_cast<double>(i) * scale;
    const double hi = static_cast<double>(i + 1) * scale;
    for (auto k = static_cast<std::size_t>(std::floor(lo)); k < src && static_cast<double>(k) < hi; ++k) {
      const double overlap = std::min(hi, static_cast<double>(k + 1)) - std::max(lo, static_cast<double>(k));
      if (overlap > 0.0) out[i].emplace_back(k, overlap / scale);
    }
  }
  return out;
}

}  // namespace

Image pixelate(const Image& img, double factor) {
  if (!(factor > 0.0 && factor <= 1.0)) throw ValidationError("pixelate: factor must be in (0,1]");
  const auto small_h = std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(img.height()) * factor));
  const auto small_w = std::max<std::size_t>(1, static_cast<std::size_t>(static_cast<double>(img.width()) * factor));
  const auto wy = box_weights(img.height(), small_h);
  const auto wx = box_weights(img.width(), small_w);
  return map_planes(img, [&](const Plane& plane) {
    Plane rows(plane.height(), small_w, 0.0);
    for (std::size_t y = 0; y < plane.height(); ++y) {
      for (std::size_t j = 0; j < small_w; ++j) {
        double acc = 0.0;
        for (const auto& [k, weight] : wx[j]) acc += weight * plane(y, k);
        rows(y, j) = acc;
      }
    }
    Plane small(small_h, small_w, 0.0);
    for (std::size_t i = 0; i < small_h; ++i) {
      for (const auto& [k, weight] : wy[i]) {
        for (std::size_t j = 0; j < small_w; ++j) small(i, j) += weight * rows(k, j);
      }
    }
    Plane out(plane.height(), plane.width());
    for (std::size_t y = 0; y < plane.height(); ++y) {
      const std::size_t sy = std::min(small_h - 1, y * small_h / plane.height());
      for (std::size_t x = 0; x < plane.width(); ++x) {
        out(y, x) = small(sy, std::min(small_w - 1, x * small_w / plane.width()));
      }
    }
    return out;
  });
}

Image adjust_brightness(const Image& img, double delta) {
  Image out = img;
  if (img.channels() != 3) {
    for (auto& plane : out.planes()) {
      for (double& v : plane.values()) v = std::clamp(v + delta, 0.0, 1.0);
    }
    return out;
  }
  // With hue and saturation fixed, HSV->RGB is linear in V, so a V shift
  // rescales the pixel; black pixels (V = 0, S = 0) become gray.
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      const double r = img.at(y, x, 0), g = img.at(y, x, 1), b = img.at(y, x, 2);
      const double v = std::max({r, g, b});
      const double v_new = std::clamp(v + delta, 0.0, 1.0);
      for (std::size_t c = 0; c < 3; ++c) {
        out.at(y, x, c) = v > 0.0 ? img.at(y, x, c) * (v_new / v) : v_new;
      }
    }
  }
  return out;
}

Image corrupt(const Image& img, const CorruptionSpec& spec, Rng& rng, const CorruptionAssets* assets) {
  spec.validate();
  validate_image(img, "corrupt");
  const auto s = static_cast<std::size_t>(spec.severity - 1);
  Image out;
  switch (spec.kind) {
    case CorruptionKind::kGaussianNoise: out = gaussian_noise(img, cc::kGaussianSigma[s], rng); break;
    case CorruptionKind::kShotNoise: out = shot_noise(img, cc::kShotPhotons[s], rng); break;
    case CorruptionKind::kImpulseNoise: out = impulse_noise(img, cc::kImpulseAmount[s], rng); break;
    case CorruptionKind::kDefocusBlur: out = defocus_blur(img, cc::kDefocus[s]); break;
    case CorruptionKind::kGlassBlur: out = glass_blur(img, cc::kGlass[s], rng); break;
    case CorruptionKind::kMotionBlur: out = motion_blur(img, cc::kMotion[s], rng); break;
    case CorruptionKind::kZoomBlur: out = zoom_blur(img, cc::kZoom[s]); break;
    case CorruptionKind::kSnow: out = snow(img, cc::kSnow[s], rng); break;
    case CorruptionKind::kFrost: out = frost(img, cc::kFrost[s], rng, assets); break;
    case CorruptionKind::kFog: out = fog(img, cc::kFog[s], rng); break;
    case CorruptionKind::kBrightness: out = adjust_brightness(img, cc::kBrightnessDelta[s]); break;
    case CorruptionKind::kContrast: out = contrast(img, cc::kContrastFactor[s]); break;
    case CorruptionKind::kElastic: out = elastic(img, cc::kElastic[s], rng); break;
    case CorruptionKind::kPixelate: out = pixelate(img, cc::kPixelateFactor[s]); break;
    case CorruptionKind::kJpeg: out = io::jpeg_roundtrip(img, cc::kJpegQuality[s]); break;
  }
  clamp_unit(out);
  return out;
}

double psnr(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw ValidationError("psnr: image shapes differ");
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t c = 0; c < a.channels(); ++c) {
    auto va = a.channel(c).values();
    auto vb = b.channel(c).values();
    for (std::size_t i = 0; i < va.size(); ++i) {
      const double d = va[i] - vb[i];
      sum += d * d;
    }
    count += va.size();
  }
  const double mse = sum / static_cast<double>(count);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

CorruptionAssets CorruptionAssets::load(const std::filesystem::path& dir) {
  CorruptionAssets assets;
  for (const auto& path : io::list_png_files(dir)) {
    if (path.filename().string().rfind("frost", 0) == 0) assets.frost_textures.push_back(io::read_png(path));
  }
  return assets;
}

std::vector<SuiteRecord> corruption_suite(const std::filesystem::path& dataset_dir,
                                          const std::filesystem::path& out_dir, std::uint64_t seed,
                                          const SuiteOptions& options) {
  for (int s : options.severities) CorruptionSpec{CorruptionKind::kGaussianNoise, s}.validate();
  const auto files = io::list_png_files(dataset_dir);
  CorruptionAssets assets;
  if (options.assets_dir) assets = CorruptionAssets::load(*options.assets_dir);

  const std::size_t per_file = options.kinds.size() * options.severities.size();
  std::vector<std::optional<Image>> images(files.size());
  std::vector<std::string> load_errors(files.size());
  parallel_for(files.size(), options.workers, [&](std::size_t i) {
    try {
      images[i] = io::read_png(files[i]);
    } catch (const std::exception& e) {
      load_errors[i] = e.what();
    }
  });

  std::vector<SuiteRecord> records(files.size() * per_file);
  parallel_for(records.size(), options.workers, [&](std::size_t task) {
    const std::size_t file = task / per_file;
    const std::size_t rest = task % per_file;
    const CorruptionKind kind = options.kinds[rest / options.severities.size()];
    const int severity = options.severities[rest % options.severities.size()];
    SuiteRecord& rec = records[task];
    rec.source = files[file].filename().string();
    rec.kind = kind;
    rec.severity = severity;
    rec.seed = derive_seed(seed, {file, static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(severity)});
    if (!images[file]) {
      rec.error = load_errors[file];
      return;
    }
    try {
      Rng rng(rec.seed);
      const Image out = corrupt(*images[file], {kind, severity}, rng, &assets);
      const std::filesystem::path rel = std::filesystem::path(std::string(to_string(kind))) /
                                        std::to_string(severity) / (files[file].stem().string() + ".png");
      io::write_png(out_dir / rel, out);
      rec.path = rel.generic_string();
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });

  // A file that failed to decode gets one record, not one per variant.
  std::vector<SuiteRecord> kept;
  std::string manifest;
  for (std::size_t task = 0; task < records.size(); ++task) {
    const std::size_t file = task / per_file;
    if (!images[file] && task % per_file != 0) continue;
    SuiteRecord rec = records[task];
    nlohmann::json row;
    row["source"] = rec.source;
    if (!images[file]) {
      row["error"] = rec.error;
    } else {
      row["kind"] = std::string(to_string(rec.kind));
      row["severity"] = rec.severity;
      row["seed"] = rec.seed;
      row["path"] = rec.path;
      if (!rec.error.empty()) row["error"] = rec.error;
    }
    manifest += row.dump() + "\n";
    kept.push_back(std::move(rec));
  }
  io::write_text_file(out_dir / "manifest.jsonl", manifest);
  return kept;
}

}  // namespace cafda
