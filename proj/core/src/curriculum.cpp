#include "cafda/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cafda/error.hpp"

namespace cafda {

std::string_view to_string(SchedulerKind kind) noexcept {
  switch (kind) {
    case SchedulerKind::kLinear: return "linear";
    case SchedulerKind::kExponential: return "exponential";
    case SchedulerKind::kAntiLinear: return "anti_linear";
    case SchedulerKind::kAntiExponential: return "anti_exponential";
    case SchedulerKind::kRandom: return "random";
  }
  return "unknown";
}

std::optional<SchedulerKind> parse_scheduler_kind(std::string_view name) noexcept {
  for (auto kind : {SchedulerKind::kLinear, SchedulerKind::kExponential, SchedulerKind::kAntiLinear,
                    SchedulerKind::kAntiExponential, SchedulerKind::kRandom}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

void CurriculumConfig::validate() const {
  if (!(beta_opt >= 0.0 && beta_opt <= 1.0)) {
    throw ValidationError("curriculum: beta_opt must be in [0,1]");
  }
  if (!(epoch_ratio > 0.0 && epoch_ratio <= 1.0)) {
    throw ValidationError("curriculum: epoch_ratio must be in (0,1]");
  }
  if (total_epochs < 1) throw ValidationError("curriculum: total_epochs must be >= 1");
  if (!(exp_curvature > 0.0) || !std::isfinite(exp_curvature)) {
    throw ValidationError("curriculum: exp_curvature must be a positive finite number");
  }
}

namespace {

double linear_ramp(const CurriculumConfig& cfg, std::uint32_t epoch) {
  const double e = static_cast<double>(epoch);
  const double stage = cfg.curriculum_epochs();
  if (e <= stage) return e / stage * cfg.beta_opt;
  return cfg.beta_opt;
}

double exponential_ramp(const CurriculumConfig& cfg, std::uint32_t epoch) {
  const double t = std::min(static_cast<double>(epoch) / cfg.curriculum_epochs(), 1.0);
  if (t >= 1.0) return cfg.beta_opt;
  const double g = cfg.exp_curvature;
  return cfg.beta_opt * std::expm1(g * t) / std::expm1(g);
}

}  // namespace

double schedule_beta(const CurriculumConfig& cfg, std::uint32_t epoch, Rng& rng) {
  cfg.validate();
  if (epoch >= cfg.total_epochs) {
    throw ValidationError("schedule_beta: epoch " + std::to_string(epoch) +
                          " outside [0, total_epochs)");
  }
  double beta = 0.0;
  switch (cfg.kind) {
    case SchedulerKind::kLinear: beta = linear_ramp(cfg, epoch); break;
    case SchedulerKind::kExponential: beta = exponential_ramp(cfg, epoch); break;
    case SchedulerKind::kAntiLinear: beta = cfg.beta_opt - linear_ramp(cfg, epoch); break;
    case SchedulerKind::kAntiExponential: beta = cfg.beta_opt - exponential_ramp(cfg, epoch); break;
    case SchedulerKind::kRandom: beta = rng.uniform() * cfg.beta_opt; break;
  }
  return std::clamp(beta, 0.0, cfg.beta_opt);
}

Rng schedule_rng(std::uint64_t seed, std::uint32_t epoch) {
  return Rng(derive_seed(seed, {epoch, 0x5C4EDULL}));
}

std::vector<std::pair<std::uint32_t, double>> schedule_table(const CurriculumConfig& cfg,
                                                             std::uint64_t seed) {
  cfg.validate();
  std::vector<std::pair<std::uint32_t, double>> rows;
  rows.reserve(cfg.total_epochs);
  for (std::uint32_t e = 0; e < cfg.total_epochs; ++e) {
    Rng rng = schedule_rng(seed, e);
    rows.emplace_back(e, schedule_beta(cfg, e, rng));
  }
  return rows;
}

std::string schedule_csv(const std::vector<std::pair<std::uint32_t, double>>& table) {
  std::string out = "epoch,beta\n";
  char line[64];
  for (const auto& [epoch, beta] : table) {
    std::snprintf(line, sizeof line, "%u,%.17g\n", epoch, beta);
    out += line;
  }
  return out;
}

}  // namespace cafda
