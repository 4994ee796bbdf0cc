#pragma once

// Inputs behind each committed golden file. Changing any of these
// invalidates the matching file in tests/golden.

#include <utility>

#include "cafda/pipeline.hpp"
#include "fixtures.hpp"

namespace cafda::check::golden {

inline std::pair<Image, Image> fusion_pair() {
  return {noise_image(16, 16, 3, 11), scene_image(16, 16, 3, 12)};
}

inline Image pixelate_input() { return quantized(scene_image(384, 384, 3, 21)); }

/// Horizontal ramp over all 256 levels, channels offset.
inline Image ramp_image() {
  Image img(8, 256, 3);
  for (std::size_t y = 0; y < 8; ++y) {
    for (std::size_t x = 0; x < 256; ++x) {
      for (std::size_t c = 0; c < 3; ++c) img.at(y, x, c) = static_cast<double>((x + 40 * c) % 256) / 255.0;
    }
  }
  return img;
}

inline constexpr std::uint64_t kAugmixSeed = 2024;
inline Image augmix_input() { return scene_image(32, 32, 3, 31); }
inline Mask augmix_mask() { return label_mask(32, 32, 2, 32); }

inline constexpr std::uint32_t kPipelineEpoch = 1;
inline constexpr std::uint64_t kPipelineIndex = 3;

inline RunConfig pipeline_config() {
  RunConfig cfg = RunConfig::preset("retina");
  cfg.curriculum.beta_opt = 0.25;
  cfg.curriculum.total_epochs = 4;
  cfg.curriculum.epoch_ratio = 0.5;
  cfg.seed = 77;
  return cfg;
}
inline Image pipeline_source() { return scene_image(16, 16, 3, 41); }
inline Mask pipeline_mask() { return label_mask(16, 16, 2, 42); }
inline Image pipeline_target() { return noise_image(16, 16, 3, 43); }

inline std::string pipeline_record(const SampleResult& r) {
  EpochRecord rec;
  rec.index = kPipelineIndex;
  rec.src = "source.png";
  rec.tgt = "target.png";
  rec.image = "images/source.png";
  rec.mask = "masks/source.png";
  rec.beta_c = r.beta_c;
  rec.seed = sample_seed(pipeline_config().seed, kPipelineEpoch, kPipelineIndex);
  rec.plan = r.plan;
  return epoch_record_json(rec);
}

}  // namespace cafda::check::golden
