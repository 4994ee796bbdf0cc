// cafda: command line front end for the curriculum amplitude-fusion toolkit.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cafda/augmix.hpp"
#include "cafda/corruptions.hpp"
#include "cafda/curriculum.hpp"
#include "cafda/error.hpp"
#include "cafda/fusion.hpp"
#include "cafda/io.hpp"
#include "cafda/metrics.hpp"
#include "cafda/parallel.hpp"
#include "cafda/pipeline.hpp"
#include "cafda/version.hpp"

namespace fs = std::filesystem;
using namespace cafda;

namespace {

enum ExitCode { kExitInternal = 1, kExitUsage = 2, kExitValidation = 3, kExitIo = 4 };

int report(const char* kind, const std::string& message, int code) {
  nlohmann::ordered_json err;
  err["error"] = kind;
  err["message"] = message;
  std::cerr << err.dump() << '\n';
  return code;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) {
    io::write_text_file(*path, text);
  } else {
    std::cout << text;
  }
}

SchedulerKind scheduler_or_throw(const std::string& name) {
  auto kind = parse_scheduler_kind(name);
  if (!kind) throw ValidationError("unknown scheduler kind '" + name + "'");
  return *kind;
}

std::vector<CorruptionKind> corruption_kinds(const std::vector<std::string>& names) {
  std::vector<CorruptionKind> out;
  for (const auto& n : names) {
    auto kind = parse_corruption_kind(n);
    if (!kind) throw ValidationError("unknown corruption kind '" + n + "'");
    out.push_back(*kind);
  }
  return out;
}

struct FuseArgs {
  std::string src, tgt, out;
  double alpha = 1.0;
  double beta = 0.0;
};

int cmd_fuse(const FuseArgs& a) {
  const Image src = io::read_png(a.src);
  const Image tgt = io::read_png(a.tgt);
  io::write_png(a.out, fda_transform(src, tgt, FusionParams{a.alpha, a.beta}));
  return 0;
}

struct ScheduleArgs {
  std::string kind = "linear";
  double beta_opt = 0.006;
  double epoch_ratio = 0.5;
  std::uint32_t epochs = 100;
  double gamma = 5.0;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
};

int cmd_schedule(const ScheduleArgs& a) {
  CurriculumConfig cfg;
  cfg.kind = scheduler_or_throw(a.kind);
  cfg.beta_opt = a.beta_opt;
  cfg.epoch_ratio = a.epoch_ratio;
  cfg.total_epochs = a.epochs;
  cfg.exp_curvature = a.gamma;
  cfg.validate();
  emit(a.out, schedule_csv(schedule_table(cfg, a.seed)));
  return 0;
}

struct AugmentArgs {
  std::string in, out;
  std::optional<std::string> mask, mask_out;
  std::uint64_t seed = 0;
  int level = 3;
  std::size_t chains = 3;
};

int cmd_augment(const AugmentArgs& a) {
  AugPolicy policy;
  policy.magnitude_level = a.level;
  policy.num_chains = a.chains;
  policy.validate();
  const Image img = io::read_png(a.in);
  std::optional<Mask> mask;
  if (a.mask) mask = io::read_mask_png(*a.mask);
  Rng rng(a.seed);
  const AugmixResult r = chained_augmix(img, mask, policy, rng);
  io::write_png(a.out, r.image);
  if (r.mask && a.mask_out) io::write_mask_png(*a.mask_out, *r.mask);
  nlohmann::ordered_json info;
  info["m"] = r.plan.coefficients.m;
  info["w"] = r.plan.coefficients.w;
  std::cout << info.dump() << '\n';
  return 0;
}

struct CorruptArgs {
  std::string in, out;
  std::uint64_t seed = 0;
  std::vector<std::string> kinds;
  std::vector<int> severities{1, 2, 3, 4, 5};
  std::optional<std::string> assets;
};

int cmd_corrupt(const CorruptArgs& a) {
  SuiteOptions options;
  if (!a.kinds.empty()) options.kinds = corruption_kinds(a.kinds);
  options.severities = a.severities;
  if (a.assets) options.assets_dir = fs::path(*a.assets);
  options.workers = default_worker_count();
  const auto records = corruption_suite(a.in, a.out, a.seed, options);
  std::size_t failures = 0;
  for (const auto& r : records) failures += !r.error.empty();
  std::cerr << records.size() - failures << " outputs, " << failures << " failures\n";
  return 0;
}

struct RunArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::uint32_t epoch = 0;
  std::optional<std::string> output_root;
};

RunConfig load_for_run(const RunArgs& a) {
  RunConfig cfg = load_run_config(a.config);
  cfg.seed = a.seed;
  if (a.output_root) cfg.output_root = *a.output_root;
  cfg.validate();
  return cfg;
}

int cmd_epoch(const RunArgs& a) {
  const RunConfig cfg = load_for_run(a);
  const DatasetManifest manifest = cfg.dataset();
  EpochOptions options;
  options.workers = default_worker_count();
  const auto records = generate_epoch(manifest, cfg, a.epoch, options);
  std::size_t failures = 0;
  for (const auto& r : records) failures += !r.error.empty();
  std::cerr << "epoch " << a.epoch << ": " << records.size() - failures << " samples, " << failures
            << " failures\n";
  return 0;
}

int cmd_run(const RunArgs& a) {
  const RunConfig cfg = load_for_run(a);
  const DatasetManifest manifest = cfg.dataset();
  EpochOptions options;
  options.workers = default_worker_count();
  run_all(manifest, cfg, options);
  return 0;
}

struct DiceArgs {
  std::string pred, gt;
  std::vector<int> classes{1};
  std::optional<std::string> out;
};

int cmd_dice(const DiceArgs& a) {
  std::vector<std::uint8_t> classes;
  for (int c : a.classes) {
    if (c < 0 || c > 255) throw ValidationError("class ids must be in [0,255]");
    classes.push_back(static_cast<std::uint8_t>(c));
  }
  emit(a.out, evaluate_masks(a.pred, a.gt, classes).to_csv());
  return 0;
}

struct SweepArgs {
  std::vector<double> ratios{0.1, 0.3, 0.5, 0.7, 0.9};
  std::vector<std::string> kinds{"linear", "exponential", "anti_linear", "anti_exponential", "random"};
  double beta_opt = 0.006;
  std::uint32_t epochs = 100;
  std::uint64_t seed = 0;
  std::optional<std::string> out;
  std::optional<std::string> summary;
};

int cmd_sweep(const SweepArgs& a) {
  std::string curves = "kind,epoch_ratio,epoch,beta\n";
  std::string summary = "kind,epoch_ratio,curriculum_epochs,mean_beta,std_beta,final_beta\n";
  char buf[160];
  for (const auto& name : a.kinds) {
    for (double ratio : a.ratios) {
      CurriculumConfig cfg;
      cfg.kind = scheduler_or_throw(name);
      cfg.beta_opt = a.beta_opt;
      cfg.epoch_ratio = ratio;
      cfg.total_epochs = a.epochs;
      cfg.validate();
      std::vector<double> betas;
      for (const auto& [epoch, beta] : schedule_table(cfg, a.seed)) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%u,%.17g\n", name.c_str(), ratio, epoch, beta);
        curves += buf;
        betas.push_back(beta);
      }
      const MeanStd s = mean_std(betas);
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g\n", name.c_str(), ratio,
                    cfg.curriculum_epochs(), s.mean, s.stddev, betas.back());
      summary += buf;
    }
  }
  emit(a.out, curves);
  if (a.summary) io::write_text_file(*a.summary, summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curriculum amplitude-fusion data pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion) + " (" + std::string(kAbiVersion) + ")");

  FuseArgs fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse the low-frequency amplitude of a target into a source");
  fuse_cmd->add_option("--src", fuse.src, "Source PNG")->required();
  fuse_cmd->add_option("--tgt", fuse.tgt, "Target PNG")->required();
  fuse_cmd->add_option("--alpha", fuse.alpha, "Target amplitude weight in [0,1]");
  fuse_cmd->add_option("--beta", fuse.beta, "Region size as a fraction of each side")->required();
  fuse_cmd->add_option("--out", fuse.out, "Output PNG")->required();

  ScheduleArgs schedule;
  auto* schedule_cmd = app.add_subcommand("schedule", "Print beta_c per epoch as CSV");
  schedule_cmd->add_option("--kind", schedule.kind,
                           "linear, exponential, anti_linear, anti_exponential or random");
  schedule_cmd->add_option("--beta-opt", schedule.beta_opt);
  schedule_cmd->add_option("--epoch-ratio", schedule.epoch_ratio);
  schedule_cmd->add_option("--epochs", schedule.epochs);
  schedule_cmd->add_option("--gamma", schedule.gamma, "Curvature of the exponential kinds");
  schedule_cmd->add_option("--seed", schedule.seed, "Seed for the random kind");
  schedule_cmd->add_option("--out", schedule.out, "Write CSV here instead of stdout");

  AugmentArgs augment;
  auto* augment_cmd = app.add_subcommand("augment", "Apply chained augmentation mixing to one image");
  augment_cmd->add_option("--in", augment.in)->required();
  augment_cmd->add_option("--out", augment.out)->required();
  augment_cmd->add_option("--mask", augment.mask);
  augment_cmd->add_option("--out-mask,--mask-out", augment.mask_out);
  augment_cmd->add_option("--seed", augment.seed)->required();
  augment_cmd->add_option("--level", augment.level, "Magnitude level");
  augment_cmd->add_option("--chains", augment.chains);

  CorruptArgs corrupt;
  auto* corrupt_cmd = app.add_subcommand("corrupt", "Generate the corruption grid for a directory of PNGs");
  corrupt_cmd->add_option("--in", corrupt.in)->required();
  corrupt_cmd->add_option("--out", corrupt.out)->required();
  corrupt_cmd->add_option("--seed", corrupt.seed)->required();
  corrupt_cmd->add_option("--kinds", corrupt.kinds)->delimiter(',');
  corrupt_cmd->add_option("--severities", corrupt.severities)->delimiter(',');
  corrupt_cmd->add_option("--assets", corrupt.assets, "Directory with frost*.png textures");

  RunArgs epoch;
  auto* epoch_cmd = app.add_subcommand("epoch", "Generate one epoch");
  epoch_cmd->add_option("--config", epoch.config)->required();
  epoch_cmd->add_option("--epoch", epoch.epoch)->required();
  epoch_cmd->add_option("--seed", epoch.seed)->required();
  epoch_cmd->add_option("--output-root", epoch.output_root, "Overrides output_root from the config");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Generate every epoch");
  run_cmd->add_option("--config", run.config)->required();
  run_cmd->add_option("--seed", run.seed)->required();
  run_cmd->add_option("--output-root", run.output_root, "Overrides output_root from the config");

  DiceArgs dice_args;
  auto* dice_cmd = app.add_subcommand("dice", "Per-class Dice report for predicted vs ground-truth masks");
  dice_cmd->add_option("--pred", dice_args.pred)->required();
  dice_cmd->add_option("--gt", dice_args.gt)->required();
  dice_cmd->add_option("--classes", dice_args.classes)->delimiter(',');
  dice_cmd->add_option("--out", dice_args.out);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Schedule curves for every kind and epoch ratio");
  sweep_cmd->add_option("--epoch-ratios", sweep.ratios)->delimiter(',');
  sweep_cmd->add_option("--kinds", sweep.kinds)->delimiter(',');
  sweep_cmd->add_option("--beta-opt", sweep.beta_opt);
  sweep_cmd->add_option("--epochs", sweep.epochs);
  sweep_cmd->add_option("--seed", sweep.seed);
  sweep_cmd->add_option("--out", sweep.out);
  sweep_cmd->add_option("--summary", sweep.summary, "Also write per-curve mean/std/final CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("usage", e.what(), kExitUsage);
  }

  try {
    if (*fuse_cmd) return cmd_fuse(fuse);
    if (*schedule_cmd) return cmd_schedule(schedule);
    if (*augment_cmd) return cmd_augment(augment);
    if (*corrupt_cmd) return cmd_corrupt(corrupt);
    if (*epoch_cmd) return cmd_epoch(epoch);
    if (*run_cmd) return cmd_run(run);
    if (*dice_cmd) return cmd_dice(dice_args);
    if (*sweep_cmd) return cmd_sweep(sweep);
  } catch (const ValidationError& e) {
    return report("validation", e.what(), kExitValidation);
  } catch (const IoError& e) {
    return report("io", e.what(), kExitIo);
  } catch (const std::exception& e) {
    return report("internal", e.what(), kExitInternal);
  }
  return kExitInternal;
}
