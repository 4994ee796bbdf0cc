#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cafda/grid.hpp"
#include "cafda/image.hpp"

namespace cafda::io {

/// [0,1] -> 8-bit, round half away from zero (same result as std::lround).
inline std::uint8_t quantize(double v) noexcept {
  const double x = (v > 0.0 ? (v < 1.0 ? v : 1.0) : 0.0) * 255.0;
  int r = static_cast<int>(x + 0.5);
  if (static_cast<double>(r) - x > 0.5) --r;
  return static_cast<std::uint8_t>(r);
}

/// Decodes any PNG as 8-bit RGB in [0,1] (gray is replicated, alpha dropped).
Image read_png(const std::filesystem::path& path);

/// Decodes a PNG as single-channel 8-bit labels.
Mask read_mask_png(const std::filesystem::path& path);

/// Encodes 1-channel images as gray and 3-channel images as RGB, 8 bits per sample.
std::vector<std::uint8_t> encode_png(const Image& img);
std::vector<std::uint8_t> encode_mask_png(const Mask& mask);
void write_png(const std::filesystem::path& path, const Image& img);
void write_mask_png(const std::filesystem::path& path, const Mask& mask);

/// Quantizes to 8 bits, encodes as baseline JPEG at `quality` (1..100) and decodes back.
Image jpeg_roundtrip(const Image& img, int quality);

/// Regular files with a .png extension (case-insensitive) in `dir`, sorted by filename.
std::vector<std::filesystem::path> list_png_files(const std::filesystem::path& dir);

/// Writes bytes to path, creating parent directories.
void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cafda::io
