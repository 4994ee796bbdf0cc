#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cafda/image.hpp"
#include "cafda/io.hpp"
#include "cafda/rng.hpp"

namespace cafda::check {

/// Uniform noise in [0,1].
inline Image noise_image(std::size_t h, std::size_t w, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  Image img(h, w, c);
  for (auto& plane : img.planes()) {
    for (double& v : plane.values()) v = rng.uniform();
  }
  return img;
}

/// Smooth blobs and gradients with mild texture; closer to a photograph than pure noise.
inline Image scene_image(std::size_t h, std::size_t w, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  Image img(h, w, c);
  for (std::size_t ch = 0; ch < c; ++ch) {
    const double fx = rng.uniform(1.0, 4.0), fy = rng.uniform(1.0, 4.0);
    const double px = rng.uniform(0.0, 6.28), py = rng.uniform(0.0, 6.28);
    const double cx = rng.uniform(0.2, 0.8) * static_cast<double>(w);
    const double cy = rng.uniform(0.2, 0.8) * static_cast<double>(h);
    const double radius = rng.uniform(0.15, 0.35) * static_cast<double>(std::min(h, w));
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        const double u = static_cast<double>(x) / static_cast<double>(w);
        const double v = static_cast<double>(y) / static_cast<double>(h);
        double val = 0.35 + 0.2 * std::sin(2 * std::numbers::pi * fx * u + px) *
                                std::cos(2 * std::numbers::pi * fy * v + py);
        const double d = std::hypot(static_cast<double>(x) - cx, static_cast<double>(y) - cy);
        if (d < radius) val += 0.3;
        val += 0.04 * (rng.uniform() - 0.5);
        img.at(y, x, ch) = std::clamp(val, 0.0, 1.0);
      }
    }
  }
  return img;
}

/// Rounds to the nearest 8-bit level, as a PNG round trip would.
inline Image quantized(Image img) {
  for (auto& plane : img.planes()) {
    for (double& v : plane.values()) v = io::quantize(v) / 255.0;
  }
  return img;
}

inline Mask label_mask(std::size_t h, std::size_t w, std::uint8_t classes, std::uint64_t seed) {
  Rng rng(seed);
  Mask m(h, w, 0);
  // A few filled rectangles per class.
  for (std::uint8_t c = 1; c <= classes; ++c) {
    for (int k = 0; k < 2; ++k) {
      const auto y0 = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(h) - 1));
      const auto x0 = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(w) - 1));
      const auto y1 = std::min(h, y0 + 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(h / 2))));
      const auto x1 = std::min(w, x0 + 1 + static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(w / 2))));
      for (std::size_t y = y0; y < y1; ++y) {
        for (std::size_t x = x0; x < x1; ++x) m(y, x) = c;
      }
    }
  }
  return m;
}

class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cafda_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Writes `sources` source images (with masks) and `targets` target images
/// under root/{src,mask,tgt} and returns the config text pointing at them.
inline std::string write_corpus(const std::filesystem::path& root, std::size_t sources, std::size_t targets,
                                std::size_t h, std::size_t w, std::uint64_t seed) {
  for (std::size_t i = 0; i < sources; ++i) {
    const std::string name = "case_" + std::to_string(100 + i) + ".png";
    io::write_png(root / "src" / name, scene_image(h, w, 3, seed + i));
    io::write_mask_png(root / "mask" / name, label_mask(h, w, 2, seed + 1000 + i));
  }
  for (std::size_t i = 0; i < targets; ++i) {
    io::write_png(root / "tgt" / ("target_" + std::to_string(i) + ".png"), scene_image(h, w, 3, seed + 5000 + i));
  }
  return "source_images = src\nsource_masks = mask\ntarget_images = tgt\noutput_root = out\n";
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Float raster stored as {"height", "width", "channels", "data": interleaved}.
inline void save_raster_json(const std::filesystem::path& p, const Image& img) {
  nlohmann::json j;
  j["height"] = img.height();
  j["width"] = img.width();
  j["channels"] = img.channels();
  j["data"] = to_interleaved(img);
  std::filesystem::create_directories(p.parent_path());
  std::ofstream(p) << j.dump() << '\n';
}

inline Image load_raster_json(const std::filesystem::path& p) {
  const auto j = nlohmann::json::parse(read_text(p));
  const auto data = j.at("data").get<std::vector<double>>();
  return from_interleaved(data, j.at("height").get<std::size_t>(), j.at("width").get<std::size_t>(),
                          j.at("channels").get<std::size_t>());
}

}  // namespace cafda::check
