#include "cafda/augmix.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cafda/augmix_ops.hpp"
#include "cafda/imgproc.hpp"
#include "cafda/io.hpp"

namespace cafda {

std::string_view to_string(AugOp op) noexcept {
  switch (op) {
    case AugOp::kAutoContrast: return "auto_contrast";
    case AugOp::kEqualize: return "equalize";
    case AugOp::kPosterize: return "posterize";
    case AugOp::kRotate: return "rotate";
    case AugOp::kSolarize: return "solarize";
    case AugOp::kShearX: return "shear_x";
    case AugOp::kShearY: return "shear_y";
    case AugOp::kTranslateX: return "translate_x";
    case AugOp::kTranslateY: return "translate_y";
  }
  return "unknown";
}

std::optional<AugOp> parse_aug_op(std::string_view name) noexcept {
  for (AugOp op : kAllAugOps) {
    if (to_string(op) == name) return op;
  }
  return std::nullopt;
}

bool is_geometric(AugOp op) noexcept {
  switch (op) {
    case AugOp::kRotate:
    case AugOp::kShearX:
    case AugOp::kShearY:
    case AugOp::kTranslateX:
    case AugOp::kTranslateY:
      return true;
    default:
      return false;
  }
}

void AugPolicy::validate() const {
  if (num_chains < 1) throw ValidationError("aug policy: num_chains must be >= 1");
  if (max_ops_per_chain < 1) throw ValidationError("aug policy: max_ops_per_chain must be >= 1");
  if (magnitude_level < augmix_limits::kMinLevel || magnitude_level > augmix_limits::kMaxLevel) {
    throw ValidationError("aug policy: magnitude_level must be in [1,10]");
  }
  if (!(beta_a > 0.0) || !(beta_b > 0.0) || !(dirichlet_param > 0.0)) {
    throw ValidationError("aug policy: distribution parameters must be positive");
  }
  if (op_set.empty()) throw ValidationError("aug policy: op_set must not be empty");
}

AugPolicy AugPolicy::cnn_profile() { return AugPolicy{}; }

AugPolicy AugPolicy::transformer_profile() {
  AugPolicy p;
  p.magnitude_level = 2;
  return p;
}

void MixCoefficients::validate(std::size_t chains) const {
  if (!(m >= 0.0 && m <= 1.0)) throw ValidationError("mix coefficients: m must be in [0,1]");
  if (w.size() != chains) throw ValidationError("mix coefficients: one weight per chain required");
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw ValidationError("mix coefficients: weights must be non-negative");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError("mix coefficients: weights must sum to 1");
}

MixCoefficients sample_mix_coefficients(Rng& rng, std::size_t k, const AugPolicy& policy) {
  if (k < 1) throw ValidationError("sample_mix_coefficients: k must be >= 1");
  MixCoefficients out;
  out.w = rng.dirichlet(k, policy.dirichlet_param);
  out.m = rng.beta(policy.beta_a, policy.beta_b);
  return out;
}

namespace {

double sample_level(int level, Rng& rng) {
  return rng.uniform(augmix_limits::kLevelFloor, static_cast<double>(level));
}

int int_parameter(double level, double max_value) {
  return static_cast<int>(level * max_value / 10.0);
}

double float_parameter(double level, double max_value) { return level * max_value / 10.0; }

double random_sign(double v, Rng& rng) { return rng.uniform() > 0.5 ? -v : v; }

std::uint8_t to_byte(double v) { return io::quantize(v); }

void auto_contrast(Plane& p) {
  const auto [lo_it, hi_it] = std::minmax_element(p.values().begin(), p.values().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return;
  const double scale = 1.0 / (hi - lo);
  for (double& v : p.values()) v = (v - lo) * scale;
}

void equalize(Plane& p) {
  std::array<std::size_t, 256> hist{};
  for (double v : p.values()) ++hist[to_byte(v)];
  std::size_t total = 0;
  std::size_t last_nonzero = 0;
  std::size_t nonzero_bins = 0;
  for (std::size_t i = 0; i < 256; ++i) {
    if (hist[i] != 0) {
      total += hist[i];
      last_nonzero = hist[i];
      ++nonzero_bins;
    }
  }
  if (nonzero_bins <= 1) return;
  const std::size_t step = (total - last_nonzero) / 255;
  if (step == 0) return;
  std::array<double, 256> lut{};
  std::size_t n = step / 2;
  for (std::size_t i = 0; i < 256; ++i) {
    lut[i] = static_cast<double>(std::min<std::size_t>(255, n / step)) / 255.0;
    n += hist[i];
  }
  for (double& v : p.values()) v = lut[to_byte(v)];
}

void posterize(Plane& p, int bits) {
  bits = std::clamp(bits, 0, 8);
  const unsigned keep = bits == 0 ? 0u : (0xFFu << (8 - bits)) & 0xFFu;
  for (double& v : p.values()) v = static_cast<double>(to_byte(v) & keep) / 255.0;
}

void solarize(Plane& p, double threshold) {
  for (double& v : p.values()) {
    if (v > threshold) v = 1.0 - v;
  }
}

imgproc::Affine geometric_map(const OpParams& params, std::size_t height, std::size_t width) {
  switch (params.op) {
    case AugOp::kRotate: return imgproc::Affine::rotation(params.value, height, width);
    case AugOp::kShearX: return imgproc::Affine::shear_x(params.value);
    case AugOp::kShearY: return imgproc::Affine::shear_y(params.value);
    case AugOp::kTranslateX: return imgproc::Affine::translation(params.value, 0.0);
    case AugOp::kTranslateY: return imgproc::Affine::translation(0.0, params.value);
    default: return imgproc::Affine::identity();
  }
}

void apply_photometric(Image& img, const OpParams& params) {
  for (auto& plane : img.planes()) {
    switch (params.op) {
      case AugOp::kAutoContrast: auto_contrast(plane); break;
      case AugOp::kEqualize: equalize(plane); break;
      case AugOp::kPosterize: posterize(plane, static_cast<int>(params.value)); break;
      case AugOp::kSolarize: solarize(plane, params.value); break;
      default: break;
    }
  }
}

}  // namespace

OpParams sample_op_params(AugOp op, int level, std::size_t height, std::size_t width, Rng& rng) {
  if (level < augmix_limits::kMinLevel || level > augmix_limits::kMaxLevel) {
    throw ValidationError("augmentation level must be in [1,10], got " + std::to_string(level));
  }
  namespace lim = augmix_limits;
  OpParams out{op, 0.0};
  switch (op) {
    case AugOp::kAutoContrast:
    case AugOp::kEqualize:
      break;
    case AugOp::kPosterize:
      out.value = lim::kPosterizeBaseBits -
                  int_parameter(sample_level(level, rng), lim::kPosterizeMaxBitReduction);
      break;
    case AugOp::kSolarize:
      out.value = (255.0 - int_parameter(sample_level(level, rng), lim::kSolarizeMaxLevels)) / 255.0;
      break;
    case AugOp::kRotate:
      out.value = random_sign(int_parameter(sample_level(level, rng), lim::kRotateMaxDegrees), rng);
      break;
    case AugOp::kShearX:
    case AugOp::kShearY:
      out.value = random_sign(float_parameter(sample_level(level, rng), lim::kShearMax), rng);
      break;
    case AugOp::kTranslateX:
      out.value = random_sign(
          int_parameter(sample_level(level, rng), static_cast<double>(width) * lim::kTranslateMaxFraction),
          rng);
      break;
    case AugOp::kTranslateY:
      out.value = random_sign(
          int_parameter(sample_level(level, rng), static_cast<double>(height) * lim::kTranslateMaxFraction),
          rng);
      break;
  }
  return out;
}

Augmented apply_op(const Image& img, const std::optional<Mask>& mask, const OpParams& params) {
  if (mask && (mask->height() != img.height() || mask->width() != img.width())) {
    throw ValidationError("apply_op: mask dimensions differ from image");
  }
  if (!is_geometric(params.op)) {
    Augmented out{img, mask};
    apply_photometric(out.image, params);
    return out;
  }
  const imgproc::Affine map = geometric_map(params, img.height(), img.width());
  Augmented out{imgproc::warp_bilinear(img, map, imgproc::Border::kZero), std::nullopt};
  if (mask) out.mask = imgproc::warp_nearest(*mask, map);
  return out;
}

Augmented apply_aug_op(const Image& img, const std::optional<Mask>& mask, AugOp op, int level,
                       Rng& rng) {
  return apply_op(img, mask, sample_op_params(op, level, img.height(), img.width(), rng));
}

AugmixPlan plan_augmix(std::size_t height, std::size_t width, const AugPolicy& policy, Rng& rng,
                       const std::optional<MixCoefficients>& injected) {
  policy.validate();
  AugmixPlan plan;
  plan.coefficients = sample_mix_coefficients(rng, policy.num_chains, policy);
  if (injected) {
    injected->validate(policy.num_chains);
    plan.coefficients = *injected;
  }

  std::vector<AugOp> photometric;
  for (AugOp op : policy.op_set) {
    if (!is_geometric(op)) photometric.push_back(op);
  }
  auto pick = [&rng](const std::vector<AugOp>& ops) {
    return ops[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(ops.size()) - 1))];
  };

  plan.chains.resize(policy.num_chains);
  for (auto& chain : plan.chains) {
    const auto depth = rng.uniform_int(1, static_cast<std::int64_t>(policy.max_ops_per_chain));
    for (std::int64_t slot = 0; slot < depth; ++slot) {
      AugOp op = pick(policy.op_set);
      if (is_geometric(op)) {
        if (!plan.geometric) {
          plan.geometric = sample_op_params(op, policy.magnitude_level, height, width, rng);
        }
        if (photometric.empty()) continue;
        op = pick(photometric);
      }
      chain.push_back(sample_op_params(op, policy.magnitude_level, height, width, rng));
    }
  }
  return plan;
}

AugmixResult execute_augmix(const Image& img, const std::optional<Mask>& mask,
                            const AugmixPlan& plan) {
  validate_image(img, "chained_augmix");
  plan.coefficients.validate(plan.chains.size());
  Augmented base{img, mask};
  if (plan.geometric) base = apply_op(img, mask, *plan.geometric);

  Image mix(img.height(), img.width(), img.channels(), 0.0);
  for (std::size_t i = 0; i < plan.chains.size(); ++i) {
    Image chain = base.image;
    for (const OpParams& op : plan.chains[i]) apply_photometric(chain, op);
    const double w = plan.coefficients.w[i];
    for (std::size_t c = 0; c < img.channels(); ++c) {
      auto dst = mix.channel(c).values();
      auto src = chain.channel(c).values();
      for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += w * src[k];
    }
  }

  const double m = plan.coefficients.m;
  for (std::size_t c = 0; c < img.channels(); ++c) {
    auto dst = mix.channel(c).values();
    auto orig = img.channel(c).values();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = m * orig[k] + (1.0 - m) * dst[k];
  }
  clamp_unit(mix);
  return {std::move(mix), std::move(base.mask), plan};
}

AugmixResult chained_augmix(const Image& img, const std::optional<Mask>& mask,
                            const AugPolicy& policy, Rng& rng,
                            const std::optional<MixCoefficients>& injected) {
  if (mask && (mask->height() != img.height() || mask->width() != img.width())) {
    throw ValidationError("chained_augmix: mask dimensions differ from image");
  }
  AugmixPlan plan = plan_augmix(img.height(), img.width(), policy, rng, injected);
  return execute_augmix(img, mask, plan);
}

}  // namespace cafda
