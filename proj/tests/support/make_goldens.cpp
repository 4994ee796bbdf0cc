// Regenerates tests/golden. Run only when a reference output is meant to change:
//   cafda_make_goldens <golden dir>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cafda/augmix.hpp"
#include "cafda/io.hpp"
#include "cafda/pipeline.hpp"
#include "fixtures.hpp"
#include "golden_cases.hpp"
#include "oracles.hpp"

using namespace cafda;
using namespace cafda::check;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: %s GOLDEN_DIR\n", argv[0]);
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  {
    const auto [src, tgt] = golden::fusion_pair();
    save_raster_json(dir / "fusion_16x16.json", oracle_fda(src, tgt, 1.0, 0.25));
  }
  io::write_png(dir / "pixelate_384_s5.png", oracle_pixelate(golden::pixelate_input(), 0.25));
  io::write_png(dir / "posterize_ramp_4bit.png", oracle_posterize(golden::ramp_image(), 4));
  {
    Rng rng(golden::kAugmixSeed);
    const auto r = chained_augmix(golden::augmix_input(), golden::augmix_mask(), AugPolicy{}, rng);
    save_raster_json(dir / "augmix_32x32.json", r.image);
    io::write_mask_png(dir / "augmix_32x32_mask.png", *r.mask);
  }
  {
    const SampleTransform transform(golden::pipeline_config());
    const auto r = transform(golden::kPipelineEpoch, golden::kPipelineIndex, golden::pipeline_source(),
                             golden::pipeline_mask(), golden::pipeline_target());
    save_raster_json(dir / "pipeline_16x16.json", r.image);
    io::write_mask_png(dir / "pipeline_16x16_mask.png", *r.mask);
    std::ofstream(dir / "pipeline_16x16_meta.json") << golden::pipeline_record(r) << '\n';
  }
  std::printf("wrote goldens to %s\n", dir.c_str());
  return 0;
}
