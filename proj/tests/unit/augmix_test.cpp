#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "cafda/augmix.hpp"
#include "cafda/augmix_ops.hpp"
#include "cafda/imgproc.hpp"
#include "cafda/io.hpp"
#include "fixtures.hpp"
#include "golden_cases.hpp"

using namespace cafda;
using namespace cafda::check;

namespace {

const std::filesystem::path kGolden = CAFDA_GOLDEN_DIR;

AugPolicy photometric_only() {
  AugPolicy p;
  p.op_set = {AugOp::kAutoContrast, AugOp::kEqualize, AugOp::kPosterize, AugOp::kSolarize};
  return p;
}

}  // namespace

TEST(MixCoefficients, SingleChainWeightIsOne) {
  Rng rng(1);
  const auto c = sample_mix_coefficients(rng, 1, AugPolicy{});
  ASSERT_EQ(c.w.size(), 1u);
  EXPECT_EQ(c.w[0], 1.0);
}

TEST(MixCoefficients, SameSeedSameDraws) {
  Rng a(5), b(5);
  const auto ca = sample_mix_coefficients(a, 3, AugPolicy{});
  const auto cb = sample_mix_coefficients(b, 3, AugPolicy{});
  EXPECT_EQ(ca.m, cb.m);
  EXPECT_EQ(ca.w, cb.w);
}

TEST(MixCoefficients, SimplexAndUnitInterval) {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const auto c = sample_mix_coefficients(rng, 4, AugPolicy{});
    EXPECT_NO_THROW(c.validate(4));
  }
}

TEST(MixCoefficients, ValidationRejectsBadInput) {
  EXPECT_THROW((MixCoefficients{1.5, {1.0}}.validate(1)), ValidationError);
  EXPECT_THROW((MixCoefficients{0.5, {0.5, 0.6}}.validate(2)), ValidationError);
  EXPECT_THROW((MixCoefficients{0.5, {1.0}}.validate(2)), ValidationError);
  EXPECT_THROW((MixCoefficients{0.5, {1.5, -0.5}}.validate(2)), ValidationError);
}

TEST(AugPolicy, ProfilesAndValidation) {
  EXPECT_EQ(AugPolicy::cnn_profile().magnitude_level, 3);
  EXPECT_EQ(AugPolicy::transformer_profile().magnitude_level, 2);
  EXPECT_EQ(AugPolicy{}.num_chains, 3u);
  EXPECT_EQ(AugPolicy{}.max_ops_per_chain, 3u);
  AugPolicy p;
  p.num_chains = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.max_ops_per_chain = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.magnitude_level = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p = {};
  p.op_set.clear();
  EXPECT_THROW(p.validate(), ValidationError);
}

TEST(AugOp, NamesRoundTrip) {
  for (AugOp op : kAllAugOps) EXPECT_EQ(parse_aug_op(to_string(op)), op);
  EXPECT_FALSE(parse_aug_op("cutout"));
  EXPECT_TRUE(is_geometric(AugOp::kRotate));
  EXPECT_FALSE(is_geometric(AugOp::kSolarize));
}

TEST(SampleOpParams, StrengthWithinPublishedBounds) {
  namespace lim = augmix_limits;
  Rng rng(3);
  for (int level = 1; level <= 10; ++level) {
    for (int i = 0; i < 200; ++i) {
      const double rot = sample_op_params(AugOp::kRotate, level, 90, 120, rng).value;
      EXPECT_LE(std::abs(rot), lim::kRotateMaxDegrees * level / 10.0);
      EXPECT_EQ(rot, std::trunc(rot));
      const double shear = sample_op_params(AugOp::kShearX, level, 90, 120, rng).value;
      EXPECT_LE(std::abs(shear), lim::kShearMax * level / 10.0);
      const double tx = sample_op_params(AugOp::kTranslateX, level, 90, 120, rng).value;
      EXPECT_LE(std::abs(tx), 120.0 / 3.0 * level / 10.0);
      const double ty = sample_op_params(AugOp::kTranslateY, level, 90, 120, rng).value;
      EXPECT_LE(std::abs(ty), 90.0 / 3.0 * level / 10.0);
      const double bits = sample_op_params(AugOp::kPosterize, level, 90, 120, rng).value;
      EXPECT_GE(bits, 4 - level * 4 / 10);
      EXPECT_LE(bits, 4);
      const double thr = sample_op_params(AugOp::kSolarize, level, 90, 120, rng).value;
      EXPECT_LE(thr, 1.0);
      EXPECT_GE(thr, (255.0 - 256.0 * level / 10.0) / 255.0);
    }
  }
  EXPECT_THROW(sample_op_params(AugOp::kRotate, 0, 4, 4, rng), ValidationError);
  EXPECT_THROW(sample_op_params(AugOp::kRotate, 11, 4, 4, rng), ValidationError);
}

TEST(ApplyOp, RotateZeroIsIdentity) {
  const Image img = scene_image(17, 23, 3, 1);
  const Mask mask = label_mask(17, 23, 3, 2);
  const auto out = apply_op(img, mask, {AugOp::kRotate, 0.0});
  EXPECT_LT(max_abs_diff(out.image, img), 1e-6);
  EXPECT_EQ(*out.mask, mask);
}

TEST(ApplyOp, SolarizeAtOneIsIdentity) {
  const Image img = noise_image(9, 9, 3, 3);
  EXPECT_EQ(apply_op(img, std::nullopt, {AugOp::kSolarize, 1.0}).image, img);
}

TEST(ApplyOp, SolarizeInvertsAboveThreshold) {
  Image img(1, 3, 1);
  img.at(0, 0, 0) = 0.2;
  img.at(0, 1, 0) = 0.5;
  img.at(0, 2, 0) = 0.9;
  const auto out = apply_op(img, std::nullopt, {AugOp::kSolarize, 0.5}).image;
  EXPECT_EQ(out.at(0, 0, 0), 0.2);
  EXPECT_EQ(out.at(0, 1, 0), 0.5);
  EXPECT_DOUBLE_EQ(out.at(0, 2, 0), 0.1);
}

TEST(ApplyOp, PosterizeGolden) {
  const Image ramp = golden::ramp_image();
  const Image out = apply_op(ramp, std::nullopt, {AugOp::kPosterize, 4.0}).image;
  const Image expected = io::read_png(kGolden / "posterize_ramp_4bit.png");
  EXPECT_EQ(max_abs_diff(out, expected), 0.0);
  std::set<long> levels;
  for (const auto& p : out.planes()) {
    for (double v : p.values()) levels.insert(std::lround(v * 255.0));
  }
  EXPECT_EQ(levels.size(), 16u);
}

TEST(ApplyOp, AutoContrastStretches) {
  Image img(1, 3, 1);
  img.at(0, 0, 0) = 0.25;
  img.at(0, 1, 0) = 0.5;
  img.at(0, 2, 0) = 0.75;
  const auto out = apply_op(img, std::nullopt, {AugOp::kAutoContrast, 0.0}).image;
  EXPECT_DOUBLE_EQ(out.at(0, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(out.at(0, 1, 0), 0.5);
  EXPECT_DOUBLE_EQ(out.at(0, 2, 0), 1.0);
}

TEST(ApplyOp, EqualizeFlattensHistogram) {
  // Four levels with 255 pixels each: step = (1020 - 255) / 255 = 3, so the
  // lookup gives 1/3, 256/3, 511/3, 766/3 -> 0, 85, 170, 255.
  Image img(4, 255, 1);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 255; ++x) img.at(y, x, 0) = 10.0 * static_cast<double>(y + 1) / 255.0;
  }
  const auto out = apply_op(img, std::nullopt, {AugOp::kEqualize, 0.0}).image;
  const long expected[] = {0, 85, 170, 255};
  for (std::size_t y = 0; y < 4; ++y) EXPECT_EQ(std::lround(out.at(y, 7, 0) * 255.0), expected[y]) << y;
}

TEST(ApplyOp, EqualizeTooFewPixelsIsIdentity) {
  Image img(1, 8, 1);
  for (std::size_t x = 0; x < 8; ++x) img.at(0, x, 0) = static_cast<double>(10 * (x / 2 + 1)) / 255.0;
  EXPECT_EQ(apply_op(img, std::nullopt, {AugOp::kEqualize, 0.0}).image, img);
}

TEST(ApplyOp, GeometricWarpsMaskWithSameMap) {
  const Image img = scene_image(20, 20, 3, 4);
  const Mask mask = label_mask(20, 20, 2, 5);
  const auto out = apply_op(img, mask, {AugOp::kTranslateX, 3.0});
  for (std::size_t y = 0; y < 20; ++y) {
    for (std::size_t x = 0; x < 20; ++x) {
      const std::uint8_t expected = x + 3 < 20 ? mask(y, x + 3) : 0;
      EXPECT_EQ((*out.mask)(y, x), expected);
      const double expected_px = x + 3 < 20 ? img.at(y, x + 3, 0) : 0.0;
      EXPECT_NEAR(out.image.at(y, x, 0), expected_px, 1e-12);
    }
  }
}

TEST(ApplyOp, MaskSizeMismatch) {
  EXPECT_THROW(apply_op(Image(4, 4, 3), Mask(4, 5, 0), {AugOp::kRotate, 5.0}), ValidationError);
}

TEST(ChainedAugmix, InjectedMOneIsIdentity) {
  const Image img = scene_image(24, 24, 3, 6);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const auto r = chained_augmix(img, std::nullopt, AugPolicy{}, rng, MixCoefficients{1.0, {0.2, 0.3, 0.5}});
    EXPECT_EQ(r.image, img);
  }
}

TEST(ChainedAugmix, InjectionKeepsOpSequence) {
  Rng a(9), b(9);
  const auto pa = plan_augmix(30, 30, AugPolicy{}, a);
  const auto pb = plan_augmix(30, 30, AugPolicy{}, b, MixCoefficients{1.0, {1.0, 0.0, 0.0}});
  ASSERT_EQ(pa.chains.size(), pb.chains.size());
  for (std::size_t i = 0; i < pa.chains.size(); ++i) {
    ASSERT_EQ(pa.chains[i].size(), pb.chains[i].size());
    for (std::size_t j = 0; j < pa.chains[i].size(); ++j) {
      EXPECT_EQ(pa.chains[i][j].op, pb.chains[i][j].op);
      EXPECT_EQ(pa.chains[i][j].value, pb.chains[i][j].value);
    }
  }
}

TEST(ChainedAugmix, PhotometricOnlyKeepsMask) {
  const Image img = scene_image(24, 24, 3, 7);
  const Mask mask = label_mask(24, 24, 3, 8);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const auto r = chained_augmix(img, mask, photometric_only(), rng);
    EXPECT_FALSE(r.plan.geometric);
    EXPECT_EQ(*r.mask, mask);
  }
}

TEST(ChainedAugmix, PlanHoldsAtMostOneGeometricStep) {
  Rng rng(10);
  for (int i = 0; i < 200; ++i) {
    const auto plan = plan_augmix(32, 32, AugPolicy{}, rng);
    for (const auto& chain : plan.chains) {
      EXPECT_GE(chain.size(), 1u);
      EXPECT_LE(chain.size(), 3u);
      for (const auto& op : chain) EXPECT_FALSE(is_geometric(op.op));
    }
    if (plan.geometric) EXPECT_TRUE(is_geometric(plan.geometric->op));
  }
}

TEST(ChainedAugmix, MaskFollowsSharedGeometricStep) {
  const Image img = scene_image(28, 28, 3, 11);
  const Mask mask = label_mask(28, 28, 2, 12);
  int seen = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Rng rng(seed);
    const auto r = chained_augmix(img, mask, AugPolicy{}, rng);
    if (!r.plan.geometric) continue;
    ++seen;
    EXPECT_EQ(*r.mask, *apply_op(img, mask, *r.plan.geometric).mask);
  }
  EXPECT_GT(seen, 0);
}

TEST(ChainedAugmix, IdentityChainsGiveInput) {
  const Image img = scene_image(16, 16, 3, 13);
  AugmixPlan plan;
  plan.chains = {{{AugOp::kSolarize, 1.0}}, {{AugOp::kSolarize, 1.0}, {AugOp::kSolarize, 1.0}}};
  plan.coefficients = {0.3, {0.4, 0.6}};
  EXPECT_LT(max_abs_diff(execute_augmix(img, std::nullopt, plan).image, img), 1e-6);
}

TEST(ChainedAugmix, RangeLabelsAndDeterminism) {
  const Image img = noise_image(20, 20, 3, 14);
  const Mask mask = label_mask(20, 20, 2, 15);
  std::set<std::uint8_t> allowed(mask.values().begin(), mask.values().end());
  allowed.insert(0);
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    Rng a(seed), b(seed);
    const auto ra = chained_augmix(img, mask, AugPolicy{}, a);
    const auto rb = chained_augmix(img, mask, AugPolicy{}, b);
    EXPECT_EQ(ra.image, rb.image);
    EXPECT_EQ(*ra.mask, *rb.mask);
    for (const auto& p : ra.image.planes()) {
      for (double v : p.values()) {
        ASSERT_GE(v, 0.0);
        ASSERT_LE(v, 1.0);
      }
    }
    for (auto label : ra.mask->values()) EXPECT_TRUE(allowed.count(label));
  }
}

TEST(ChainedAugmix, Golden) {
  Rng rng(golden::kAugmixSeed);
  const auto r = chained_augmix(golden::augmix_input(), golden::augmix_mask(), AugPolicy{}, rng);
  EXPECT_LT(max_abs_diff(r.image, load_raster_json(kGolden / "augmix_32x32.json")), 1e-12);
  EXPECT_EQ(*r.mask, io::read_mask_png(kGolden / "augmix_32x32_mask.png"));
}
