#include <benchmark/benchmark.h>

#include <optional>

#include "cafda/augmix.hpp"
#include "cafda/corruptions.hpp"
#include "cafda/fusion.hpp"
#include "cafda/io.hpp"
#include "cafda/pipeline.hpp"
#include "cafda/rng.hpp"
#include "cafda/spectral.hpp"

using namespace cafda;

namespace {

Image random_image(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  Image img(h, w, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (double& v : img.channel(c).values()) v = rng.uniform();
  }
  return img;
}

Mask random_mask(std::size_t h, std::size_t w, std::uint64_t seed) {
  Rng rng(seed);
  Mask m(h, w);
  for (auto& v : m.values()) v = static_cast<std::uint8_t>(rng.uniform_int(0, 2));
  return m;
}

void BM_ForwardDft(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Plane p = random_image(n, n, 1).channel(0);
  for (auto _ : state) benchmark::DoNotOptimize(forward_dft(p));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ForwardDft)->Arg(64)->Arg(256)->Arg(384)->Arg(383)->Unit(benchmark::kMillisecond);

void BM_FdaTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const double beta = static_cast<double>(state.range(1)) / 1000.0;
  const Image src = random_image(n, n, 2);
  const Image tgt = random_image(n, n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(fda_transform(src, tgt, {1.0, beta}));
}
BENCHMARK(BM_FdaTransform)->Args({384, 6})->Args({384, 100})->Args({256, 1000})->Unit(benchmark::kMillisecond);

void BM_ChainedAugmix(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Image img = random_image(n, n, 4);
  const Mask mask = random_mask(n, n, 5);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(chained_augmix(img, mask, AugPolicy{}, rng));
  }
}
BENCHMARK(BM_ChainedAugmix)->Arg(128)->Arg(384)->Unit(benchmark::kMillisecond);

void BM_SampleTransform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RunConfig cfg = RunConfig::preset("retina");
  const SampleTransform transform(cfg);
  const Image src = random_image(n, n, 6);
  const Image tgt = random_image(n, n, 7);
  const std::optional<Mask> mask = random_mask(n, n, 8);
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(transform(60, index++, src, mask, tgt));
}
BENCHMARK(BM_SampleTransform)->Arg(384)->Unit(benchmark::kMillisecond);

void BM_Corrupt(benchmark::State& state) {
  const auto kind = static_cast<CorruptionKind>(state.range(0));
  const Image img = random_image(128, 128, 9);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(corrupt(img, {kind, 3}, rng));
  }
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_Corrupt)->DenseRange(0, 14)->Unit(benchmark::kMillisecond);

void BM_EncodePng(benchmark::State& state) {
  const Image img = random_image(384, 384, 10);
  for (auto _ : state) benchmark::DoNotOptimize(io::encode_png(img));
}
BENCHMARK(BM_EncodePng)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
