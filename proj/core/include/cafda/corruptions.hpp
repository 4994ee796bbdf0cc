#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cafda/image.hpp"
#include "cafda/rng.hpp"

namespace cafda {

enum class CorruptionKind {
  kGaussianNoise,
  kShotNoise,
  kImpulseNoise,
  kDefocusBlur,
  kGlassBlur,
  kMotionBlur,
  kZoomBlur,
  kSnow,
  kFrost,
  kFog,
  kBrightness,
  kContrast,
  kElastic,
  kPixelate,
  kJpeg,
};

inline constexpr std::array<CorruptionKind, 15> kAllCorruptions = {
    CorruptionKind::kGaussianNoise, CorruptionKind::kShotNoise,  CorruptionKind::kImpulseNoise,
    CorruptionKind::kDefocusBlur,   CorruptionKind::kGlassBlur,  CorruptionKind::kMotionBlur,
    CorruptionKind::kZoomBlur,      CorruptionKind::kSnow,       CorruptionKind::kFrost,
    CorruptionKind::kFog,           CorruptionKind::kBrightness, CorruptionKind::kContrast,
    CorruptionKind::kElastic,       CorruptionKind::kPixelate,   CorruptionKind::kJpeg};

std::string_view to_string(CorruptionKind kind) noexcept;
std::optional<CorruptionKind> parse_corruption_kind(std::string_view name) noexcept;

/// noise, blur, weather or digital
std::string_view corruption_group(CorruptionKind kind) noexcept;

struct CorruptionSpec {
  CorruptionKind kind = CorruptionKind::kGaussianNoise;
  int severity = 1;  ///< 1..5

  void validate() const;
};

/// Optional texture assets for weather corruptions. When `frost_textures`
/// is non-empty, frost samples a random crop of one of them instead of the
/// procedural texture.
struct CorruptionAssets {
  std::vector<Image> frost_textures;

  /// Loads frost*.png from dir (may be empty).
  static CorruptionAssets load(const std::filesystem::path& dir);
};

/// Applies one corruption. Output is in [0,1] and depends only on
/// (img, spec, rng state). jpeg quantizes its input to 8 bits first.
Image corrupt(const Image& img, const CorruptionSpec& spec, Rng& rng,
              const CorruptionAssets* assets = nullptr);

/// Brightness shift in HSV value; exposed for the delta-0 identity case.
Image adjust_brightness(const Image& img, double delta);

/// Box-average down to floor(side * factor) (at least 1), then nearest-neighbor back up.
Image pixelate(const Image& img, double factor);

/// 10 * log10(1 / MSE) for [0,1] images; +infinity for identical inputs.
double psnr(const Image& a, const Image& b);

struct SuiteRecord {
  std::string source;  ///< input file name
  std::string path;    ///< output path relative to out_dir, empty on failure
  CorruptionKind kind = CorruptionKind::kGaussianNoise;
  int severity = 0;
  std::uint64_t seed = 0;
  std::string error;   ///< empty on success
};

struct SuiteOptions {
  std::vector<CorruptionKind> kinds{kAllCorruptions.begin(), kAllCorruptions.end()};
  std::vector<int> severities{1, 2, 3, 4, 5};
  std::optional<std::filesystem::path> assets_dir;
  std::size_t workers = 1;
};

/// Corrupts every PNG in dataset_dir with every (kind, severity), writing
/// out_dir/<kind>/<severity>/<name>.png and out_dir/manifest.jsonl (one JSON
/// record per output: source, path, kind, severity, seed, plus error on
/// failure). Per-output seeds derive from (seed, file index, kind, severity).
/// Unreadable inputs are recorded and skipped.
std::vector<SuiteRecord> corruption_suite(const std::filesystem::path& dataset_dir,
                                          const std::filesystem::path& out_dir, std::uint64_t seed,
                                          const SuiteOptions& options = {});

}  // namespace cafda
