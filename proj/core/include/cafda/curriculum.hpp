#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cafda/rng.hpp"

namespace cafda {

enum class SchedulerKind { kLinear, kExponential, kAntiLinear, kAntiExponential, kRandom };

std::string_view to_string(SchedulerKind kind) noexcept;
std::optional<SchedulerKind> parse_scheduler_kind(std::string_view name) noexcept;

struct CurriculumConfig {
  double beta_opt = 0.006;
  double epoch_ratio = 0.5;     ///< share of training spent in the curriculum stage, (0,1]
  std::uint32_t total_epochs = 100;
  SchedulerKind kind = SchedulerKind::kLinear;
  double exp_curvature = 5.0;   ///< gamma of the exponential ramp, > 0

  void validate() const;

  /// E * r_e, the epoch at which the forward ramps reach beta_opt.
  double curriculum_epochs() const noexcept {
    return static_cast<double>(total_epochs) * epoch_ratio;
  }
};

/// Scaling coefficient for epoch `epoch` (0-based, < total_epochs).
///
///   linear:       beta_opt * e / (E * r_e), then beta_opt once e >= E * r_e
///   exponential:  beta_opt * (exp(g t) - 1) / (exp(g) - 1), t = min(e / (E r_e), 1)
///   anti_*:       beta_opt minus the corresponding forward ramp
///   random:       uniform draw in [0, beta_opt] from `rng`
///
/// The result is clamped to [0, beta_opt]. `rng` is only consumed by kRandom.
double schedule_beta(const CurriculumConfig& cfg, std::uint32_t epoch, Rng& rng);

/// Generator for the random kind's draw at `epoch`; depends on (seed, epoch) only,
/// so every sample within an epoch sees the same value.
Rng schedule_rng(std::uint64_t seed, std::uint32_t epoch);

/// (epoch, beta_c) for every epoch, random draws taken from schedule_rng(seed, e).
std::vector<std::pair<std::uint32_t, double>> schedule_table(const CurriculumConfig& cfg,
                                                             std::uint64_t seed = 0);

/// CSV text "epoch,beta" with one row per epoch.
std::string schedule_csv(const std::vector<std::pair<std::uint32_t, double>>& table);

}  // namespace cafda
