#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cafda/augmix.hpp"
#include "cafda/curriculum.hpp"
#include "cafda/grid.hpp"
#include "cafda/image.hpp"
#include "cafda/rng.hpp"

namespace cafda {

enum class Domain { kSource, kTarget };

struct DatasetRecord {
  std::filesystem::path image;
  std::optional<std::filesystem::path> mask;
  Domain domain = Domain::kSource;
};

struct DatasetManifest {
  std::vector<DatasetRecord> records;
  /// When set, images are resized (bilinear) and masks resized (nearest) to this size on load.
  std::optional<std::size_t> height;
  std::optional<std::size_t> width;

  std::vector<const DatasetRecord*> sources() const;
  std::vector<const DatasetRecord*> targets() const;

  /// Structural checks: at least one source and one target, masks on source
  /// records only, height and width set together. With `decode`, every file
  /// is also decoded and mask dims are checked against their images.
  void validate(bool decode = false) const;

  /// Source images from one directory, masks matched by file name from
  /// another (optional), target images from a third. Files are sorted by name.
  static DatasetManifest from_directories(const std::filesystem::path& source_images,
                                          const std::optional<std::filesystem::path>& source_masks,
                                          const std::filesystem::path& target_images);
};

enum class Pairing { kUniformRandom };

struct RunConfig {
  CurriculumConfig curriculum;
  double alpha = 1.0;
  bool augment = true;
  AugPolicy aug;
  std::uint64_t seed = 0;
  std::filesystem::path output_root = "out";
  Pairing pairing = Pairing::kUniformRandom;

  std::filesystem::path source_images;
  std::optional<std::filesystem::path> source_masks;
  std::filesystem::path target_images;
  std::optional<std::size_t> height;
  std::optional<std::size_t> width;

  /// Replaces the sampled mix coefficients of every sample. Not settable from a config file.
  std::optional<MixCoefficients> injected_mix;

  void validate() const;

  /// "retina" (beta_opt 0.006, alpha 1.0, level 3), "retina_transformer"
  /// (beta_opt 0.006, alpha 0.5, level 2) or "nuclei" (beta_opt 1.0, alpha 0.7, level 3).
  static RunConfig preset(std::string_view name);

  DatasetManifest dataset() const;
};

/// Parses "key = value" lines ('#' starts a comment). A `preset` key is
/// applied before all other keys. Relative paths resolve against base_dir.
/// Keys: preset, seed, alpha, beta_opt, epoch_ratio, epochs, scheduler,
/// exp_curvature, augment, aug.level, aug.chains, aug.max_ops, aug.beta_a,
/// aug.beta_b, aug.dirichlet, aug.ops, source_images, source_masks,
/// target_images, output_root, height, width, pairing.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical config text; parse_run_config(to_config_text(c)) reproduces c.
std::string to_config_text(const RunConfig& cfg);

struct EpochState {
  std::uint32_t epoch = 0;
  double beta_c = 0.0;
};

/// beta_c for the epoch, drawn from schedule_rng for the random kind.
EpochState epoch_state(const RunConfig& cfg, std::uint32_t epoch);

/// Seed of the generator handed to sample `sample_index` of `epoch`.
std::uint64_t sample_seed(std::uint64_t seed, std::uint32_t epoch, std::uint64_t sample_index) noexcept;

struct SampleResult {
  Image image;
  std::optional<Mask> mask;
  double beta_c = 0.0;
  std::optional<AugmixPlan> plan;  ///< empty when augmentation is off
};

/// Fusion at the epoch's beta_c with the configured alpha, then chained
/// augmix (if enabled). Component errors are rethrown with sample context.
SampleResult curri_afda_sample(const Image& src, const std::optional<Mask>& mask, const Image& tgt,
                               const RunConfig& cfg, const EpochState& st, Rng& rng);

/// Result of the interleaved buffer path.
struct InterleavedSample {
  std::vector<double> image;         ///< H x W x C, channel fastest
  std::vector<std::uint8_t> mask;    ///< H x W, empty when no mask was given
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  double beta_c = 0.0;
};

/// Per-sample transform bound to one config, as used by generate_epoch.
/// Calls are independent and may run concurrently.
class SampleTransform {
 public:
  explicit SampleTransform(RunConfig cfg);

  const RunConfig& config() const noexcept { return cfg_; }

  SampleResult operator()(std::uint32_t epoch, std::uint64_t sample_index, const Image& src,
                          const std::optional<Mask>& mask, const Image& tgt) const;

  /// Same computation on contiguous H x W x C buffers. `mask` may be empty.
  InterleavedSample apply_interleaved(std::uint32_t epoch, std::uint64_t sample_index,
                                      std::span<const double> src, std::size_t height,
                                      std::size_t width, std::size_t channels,
                                      std::span<const std::uint8_t> mask,
                                      std::span<const double> tgt, std::size_t tgt_height,
                                      std::size_t tgt_width) const;

 private:
  RunConfig cfg_;
  std::vector<EpochState> states_;
};

/// Target index for each source, one uniform draw per source from (seed, epoch).
std::vector<std::size_t> pair_targets(std::uint64_t seed, std::uint32_t epoch, std::size_t sources,
                                      std::size_t targets);

struct EpochRecord {
  std::size_t index = 0;
  std::string src;
  std::string tgt;
  std::string image;  ///< relative to the epoch directory, empty on failure
  std::string mask;   ///< relative to the epoch directory, empty without a mask
  double beta_c = 0.0;
  std::uint64_t seed = 0;
  std::optional<AugmixPlan> plan;
  std::string error;
};

struct EpochOptions {
  std::size_t workers = 1;
  /// Receives each float result before quantization. Called from worker threads.
  std::function<void(std::size_t, const SampleResult&)> on_sample;
};

/// Loads an image (and optional mask) applying the manifest's size policy.
Image load_image(const DatasetManifest& manifest, const std::filesystem::path& path);
Mask load_mask(const DatasetManifest& manifest, const std::filesystem::path& path);

/// Writes output_root/epoch_<e>/{images,masks}/<source name>.png and
/// output_root/epoch_<e>/manifest.jsonl (one row per source, by index).
std::vector<EpochRecord> generate_epoch(const DatasetManifest& manifest, const RunConfig& cfg,
                                        std::uint32_t epoch, const EpochOptions& options = {});

/// generate_epoch for every epoch, plus output_root/config.cfg and schedule.csv.
void run_all(const DatasetManifest& manifest, const RunConfig& cfg, const EpochOptions& options = {});

/// One manifest line.
std::string epoch_record_json(const EpochRecord& record);

}  // namespace cafda
