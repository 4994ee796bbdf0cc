#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

#include "cafda/imgproc.hpp"
#include "cafda/io.hpp"
#include "cafda/parallel.hpp"
#include "cafda/rng.hpp"
#include "fixtures.hpp"

using namespace cafda;
using namespace cafda::check;

TEST(Rng, EngineSequenceIsStandard) {
  // 10000th output of a default-seeded mt19937_64, fixed by the C++ standard.
  Rng rng(5489u);
  std::uint64_t v = 0;
  for (int i = 0; i < 10000; ++i) v = rng.next_u64();
  EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, DeriveSeedDependsOnWholePath) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 20; ++a) {
    for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(7, {a, b}));
  }
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_NE(derive_seed(7, {1, 2}), derive_seed(7, {2, 1}));
  EXPECT_NE(derive_seed(7, {1}), derive_seed(8, {1}));
}

TEST(Rng, DistributionMoments) {
  Rng rng(11);
  const int n = 200000;
  double u = 0, nrm = 0, nrm2 = 0, beta = 0, gamma = 0, pois_small = 0, pois_large = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.uniform();
    ASSERT_GE(x, 0.0);
    ASSERT_LT(x, 1.0);
    u += x;
    const double z = rng.normal();
    nrm += z;
    nrm2 += z * z;
    beta += rng.beta(2.0, 5.0);
    gamma += rng.gamma(0.5);
    pois_small += static_cast<double>(rng.poisson(3.5));
    pois_large += static_cast<double>(rng.poisson(120.0));
  }
  EXPECT_NEAR(u / n, 0.5, 0.005);
  EXPECT_NEAR(nrm / n, 0.0, 0.01);
  EXPECT_NEAR(nrm2 / n, 1.0, 0.01);
  EXPECT_NEAR(beta / n, 2.0 / 7.0, 0.005);
  EXPECT_NEAR(gamma / n, 0.5, 0.01);
  EXPECT_NEAR(pois_small / n, 3.5, 0.02);
  EXPECT_NEAR(pois_large / n, 120.0, 0.2);
}

TEST(Rng, UniformIntInclusiveAndDirichletSimplex) {
  Rng rng(3);
  std::set<std::int64_t> values;
  for (int i = 0; i < 2000; ++i) values.insert(rng.uniform_int(-2, 2));
  EXPECT_EQ(values, (std::set<std::int64_t>{-2, -1, 0, 1, 2}));
  for (int i = 0; i < 100; ++i) {
    const auto w = rng.dirichlet(5, 1.0);
    EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
  }
  EXPECT_EQ(rng.dirichlet(1, 1.0), std::vector<double>{1.0});
  EXPECT_EQ(rng.poisson(0.0), 0);
}

TEST(Parallel, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(500);
  parallel_for(hits.size(), 8, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(Parallel, RethrowsTaskFailure) {
  EXPECT_THROW(parallel_for(50, 4, [](std::size_t i) {
                 if (i == 17) throw IoError("boom");
               }),
               IoError);
}

TEST(Parallel, WorkerCountFromEnvironment) {
  ::setenv("CAFDA_WORKERS", "3", 1);
  EXPECT_EQ(default_worker_count(), 3u);
  ::setenv("CAFDA_WORKERS", "zero", 1);
  EXPECT_THROW(default_worker_count(), ValidationError);
  ::setenv("CAFDA_WORKERS", "0", 1);
  EXPECT_THROW(default_worker_count(), ValidationError);
  ::unsetenv("CAFDA_WORKERS");
  EXPECT_GE(default_worker_count(), 1u);
}

TEST(Imgproc, BilinearExactAtIntegerCoordinates) {
  const Plane p = noise_image(6, 7, 1, 1).channel(0);
  for (std::size_t y = 0; y < 6; ++y) {
    for (std::size_t x = 0; x < 7; ++x) {
      EXPECT_EQ(imgproc::sample_bilinear(p, double(x), double(y), imgproc::Border::kZero), p(y, x));
    }
  }
  EXPECT_DOUBLE_EQ(imgproc::sample_bilinear(p, 0.5, 0.0, imgproc::Border::kZero), 0.5 * (p(0, 0) + p(0, 1)));
  EXPECT_EQ(imgproc::sample_bilinear(p, -3.0, 2.0, imgproc::Border::kZero), 0.0);
}

TEST(Imgproc, RotationByNinetyOnSquare) {
  Plane p(5, 5, 0.0);
  p(0, 4) = 1.0;  // top-right
  const Plane out = imgproc::warp_bilinear(p, imgproc::Affine::rotation(90.0, 5, 5), imgproc::Border::kZero);
  // Counter-clockwise: top-right moves to top-left.
  EXPECT_NEAR(out(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(out(0, 4), 0.0, 1e-12);
}

TEST(Imgproc, GaussianBlurKeepsConstant) {
  const Plane out = imgproc::gaussian_blur(Plane(9, 11, 0.4), 1.7, imgproc::Border::kReflect);
  for (double v : out.values()) EXPECT_NEAR(v, 0.4, 1e-14);
}

TEST(Imgproc, ResizeSameSizeIsIdentity) {
  const Image img = noise_image(8, 9, 3, 2);
  EXPECT_LT(max_abs_diff(imgproc::resize_bilinear(img, 8, 9), img), 1e-15);
  const Mask m = label_mask(8, 9, 3, 3);
  EXPECT_EQ(imgproc::resize_nearest(m, 8, 9), m);
  EXPECT_EQ(imgproc::resize_nearest(m, 16, 18)(15, 17), m(7, 8));
}

TEST(Imgproc, WarpNearestFillsZero) {
  const Mask m(4, 4, 3);
  const Mask out = imgproc::warp_nearest(m, imgproc::Affine::translation(2.0, 0.0));
  EXPECT_EQ(out(0, 1), 3);
  EXPECT_EQ(out(0, 2), 0);
  EXPECT_EQ(out(0, 3), 0);
}

TEST(Image, InterleavedRoundTrip) {
  const Image img = noise_image(3, 4, 3, 4);
  const auto buf = to_interleaved(img);
  ASSERT_EQ(buf.size(), 36u);
  EXPECT_EQ(buf[(1 * 4 + 2) * 3 + 1], img.at(1, 2, 1));
  EXPECT_EQ(from_interleaved(buf, 3, 4, 3), img);
  EXPECT_THROW(from_interleaved(buf, 3, 4, 2), ValidationError);
}

TEST(Io, QuantizeMatchesLround) {
  auto reference = [](double v) { return std::lround(std::clamp(v, 0.0, 1.0) * 255.0); };
  for (int k = 0; k <= 255; ++k) {
    double up = (k + 0.5) / 255.0;
    double down = up;
    for (int step = 0; step < 40; ++step) {
      EXPECT_EQ(io::quantize(up), reference(up)) << up;
      EXPECT_EQ(io::quantize(down), reference(down)) << down;
      up = std::nextafter(up, 2.0);
      down = std::nextafter(down, -1.0);
    }
  }
  Rng rng(12);
  for (int i = 0; i < 100000; ++i) {
    const double v = rng.uniform() * 1.2 - 0.1;
    EXPECT_EQ(io::quantize(v), reference(v)) << v;
  }
}

TEST(Io, PngRoundTripQuantizes) {
  TempDir dir;
  const Image img = noise_image(7, 5, 3, 5);
  io::write_png(dir / "a/b/x.png", img);
  const Image back = io::read_png(dir / "a/b/x.png");
  EXPECT_LE(max_abs_diff(back, img), 0.5 / 255.0 + 1e-12);
  EXPECT_EQ(back, quantized(img));
  const Mask m = label_mask(7, 5, 4, 6);
  io::write_mask_png(dir / "m.png", m);
  EXPECT_EQ(io::read_mask_png(dir / "m.png"), m);
}

TEST(Io, GrayPngIsReplicated) {
  TempDir dir;
  io::write_png(dir / "g.png", Image(2, 2, 1, 0.2));
  const Image img = io::read_png(dir / "g.png");
  EXPECT_EQ(img.channels(), 3u);
  EXPECT_EQ(img.at(1, 1, 2), 51.0 / 255.0);
}

TEST(Io, ErrorsAndListing) {
  TempDir dir;
  EXPECT_THROW(io::read_png(dir / "missing.png"), IoError);
  io::write_text_file(dir / "bad.png", "nope");
  EXPECT_THROW(io::read_png(dir / "bad.png"), IoError);
  io::write_png(dir / "B.PNG", Image(1, 1, 3));
  io::write_png(dir / "a.png", Image(1, 1, 3));
  io::write_text_file(dir / "notes.txt", "x");
  const auto files = io::list_png_files(dir.path());
  ASSERT_EQ(files.size(), 3u);
  EXPECT_EQ(files[0].filename(), "B.PNG");
  EXPECT_EQ(files[1].filename(), "a.png");
  EXPECT_THROW(io::list_png_files(dir / "nowhere"), IoError);
}

TEST(Io, QuantizeRoundsToNearest) {
  EXPECT_EQ(io::quantize(0.0), 0);
  EXPECT_EQ(io::quantize(1.0), 255);
  EXPECT_EQ(io::quantize(0.5), 128);
  EXPECT_EQ(io::quantize(1.7), 255);
  EXPECT_EQ(io::quantize(-0.2), 0);
}
