#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "cafda/grid.hpp"
#include "cafda/image.hpp"
#include "cafda/rng.hpp"

namespace cafda {

enum class AugOp {
  kAutoContrast,
  kEqualize,
  kPosterize,
  kRotate,
  kSolarize,
  kShearX,
  kShearY,
  kTranslateX,
  kTranslateY,
};

inline constexpr std::array<AugOp, 9> kAllAugOps = {
    AugOp::kAutoContrast, AugOp::kEqualize, AugOp::kPosterize, AugOp::kRotate,     AugOp::kSolarize,
    AugOp::kShearX,       AugOp::kShearY,   AugOp::kTranslateX, AugOp::kTranslateY};

std::string_view to_string(AugOp op) noexcept;
std::optional<AugOp> parse_aug_op(std::string_view name) noexcept;
bool is_geometric(AugOp op) noexcept;

struct AugPolicy {
  std::size_t num_chains = 3;
  std::size_t max_ops_per_chain = 3;
  int magnitude_level = 3;
  double beta_a = 1.0;
  double beta_b = 1.0;
  double dirichlet_param = 1.0;
  std::vector<AugOp> op_set{kAllAugOps.begin(), kAllAugOps.end()};

  void validate() const;

  /// Level 3, the CNN-backbone setting.
  static AugPolicy cnn_profile();
  /// Level 2, the transformer-backbone setting.
  static AugPolicy transformer_profile();
};

struct MixCoefficients {
  double m = 1.0;         ///< weight of the un-augmented image
  std::vector<double> w;  ///< chain weights on the simplex

  void validate(std::size_t chains) const;
};

/// w ~ Dirichlet(dirichlet_param, ..., dirichlet_param) of length k, then m ~ Beta(beta_a, beta_b).
MixCoefficients sample_mix_coefficients(Rng& rng, std::size_t k, const AugPolicy& policy);

/// A fully resolved op. `value` is degrees for rotate, shear factor for
/// shear_*, pixels for translate_*, bits kept for posterize, threshold in
/// [0,1] for solarize, unused for auto_contrast and equalize.
struct OpParams {
  AugOp op = AugOp::kAutoContrast;
  double value = 0.0;
};

/// Draws the strength of `op` at magnitude `level` for an image of the given size.
OpParams sample_op_params(AugOp op, int level, std::size_t height, std::size_t width, Rng& rng);

struct Augmented {
  Image image;
  std::optional<Mask> mask;
};

/// Applies one resolved op. Photometric ops leave the mask untouched;
/// geometric ops warp the image bilinearly and the mask by nearest
/// neighbor with the same map, filling uncovered pixels with 0.
Augmented apply_op(const Image& img, const std::optional<Mask>& mask, const OpParams& params);

/// sample_op_params followed by apply_op.
Augmented apply_aug_op(const Image& img, const std::optional<Mask>& mask, AugOp op, int level,
                       Rng& rng);

/// Every random decision of one chained_augmix call.
struct AugmixPlan {
  std::optional<OpParams> geometric;        ///< shared first step of every chain and of the mask
  std::vector<std::vector<OpParams>> chains;  ///< photometric ops per chain
  MixCoefficients coefficients;
};

/// Draw order: coefficients (w then m), then per chain a depth in
/// [1, max_ops_per_chain] and one op per slot. The first geometric op drawn
/// becomes the shared geometric step; that slot and any later geometric
/// slot are redrawn from the photometric ops of the policy.
/// `injected`, when set, replaces the drawn coefficients (draws still happen,
/// so the op sequence does not depend on injection).
AugmixPlan plan_augmix(std::size_t height, std::size_t width, const AugPolicy& policy, Rng& rng,
                       const std::optional<MixCoefficients>& injected = std::nullopt);

struct AugmixResult {
  Image image;
  std::optional<Mask> mask;
  AugmixPlan plan;
};

/// x_aug = m * x + (1 - m) * sum_i w_i * H_i(x), clamped to [0,1], where
/// H_i applies the shared geometric step (if any) and then chain i's ops.
/// The mask receives the shared geometric step only.
AugmixResult execute_augmix(const Image& img, const std::optional<Mask>& mask,
                            const AugmixPlan& plan);

AugmixResult chained_augmix(const Image& img, const std::optional<Mask>& mask,
                            const AugPolicy& policy, Rng& rng,
                            const std::optional<MixCoefficients>& injected = std::nullopt);

}  // namespace cafda
