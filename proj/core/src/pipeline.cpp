#include "cafda/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cafda/error.hpp"
#include "cafda/fusion.hpp"
#include "cafda/imgproc.hpp"
#include "cafda/io.hpp"
#include "cafda/parallel.hpp"

namespace cafda {

namespace {

constexpr std::uint64_t kPairingStream = 0x9A12ULL;
constexpr std::uint64_t kSampleStream = 0x5A3FULL;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    if (auto item = trim(s.substr(start, end - start)); !item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ValidationError("config: " + key + " expects a number, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ValidationError("config: " + key + " expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("config: " + key + " expects true or false, got '" + value + "'");
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& value) {
  const std::filesystem::path p(value);
  return p.is_absolute() || base.empty() ? p : base / p;
}

nlohmann::ordered_json op_json(const OpParams& p) {
  nlohmann::ordered_json j;
  j["op"] = std::string(to_string(p.op));
  j["value"] = p.value;
  return j;
}

}  // namespace

std::vector<const DatasetRecord*> DatasetManifest::sources() const {
  std::vector<const DatasetRecord*> out;
  for (const auto& r : records) {
    if (r.domain == Domain::kSource) out.push_back(&r);
  }
  return out;
}

std::vector<const DatasetRecord*> DatasetManifest::targets() const {
  std::vector<const DatasetRecord*> out;
  for (const auto& r : records) {
    if (r.domain == Domain::kTarget) out.push_back(&r);
  }
  return out;
}

void DatasetManifest::validate(bool decode) const {
  if (sources().empty()) throw ValidationError("dataset: no source records");
  if (targets().empty()) throw ValidationError("dataset: no target records");
  if (height.has_value() != width.has_value()) {
    throw ValidationError("dataset: height and width must be set together");
  }
  if ((height && *height == 0) || (width && *width == 0)) {
    throw ValidationError("dataset: target size must be positive");
  }
  for (const auto& r : records) {
    if (r.domain == Domain::kTarget && r.mask) {
      throw ValidationError("dataset: target record " + r.image.string() + " has a mask");
    }
    if (!decode) continue;
    const Image img = load_image(*this, r.image);
    if (r.mask) {
      const Mask m = load_mask(*this, *r.mask);
      if (m.height() != img.height() || m.width() != img.width()) {
        throw ValidationError("dataset: mask " + r.mask->string() + " does not match its image size");
      }
    }
  }
}

DatasetManifest DatasetManifest::from_directories(const std::filesystem::path& source_images,
                                                  const std::optional<std::filesystem::path>& source_masks,
                                                  const std::filesystem::path& target_images) {
  DatasetManifest manifest;
  for (const auto& p : io::list_png_files(source_images)) {
    DatasetRecord rec{p, std::nullopt, Domain::kSource};
    if (source_masks) {
      const auto m = *source_masks / p.filename();
      if (!std::filesystem::exists(m)) throw IoError("dataset: no mask for " + p.string());
      rec.mask = m;
    }
    manifest.records.push_back(std::move(rec));
  }
  for (const auto& p : io::list_png_files(target_images)) {
    manifest.records.push_back({p, std::nullopt, Domain::kTarget});
  }
  return manifest;
}

void RunConfig::validate() const {
  curriculum.validate();
  FusionParams{alpha, curriculum.beta_opt}.validate();
  aug.validate();
  if (height.has_value() != width.has_value()) {
    throw ValidationError("config: height and width must be set together");
  }
  if (injected_mix) injected_mix->validate(aug.num_chains);
}

RunConfig RunConfig::preset(std::string_view name) {
  RunConfig cfg;
  if (name == "retina") {
    cfg.curriculum.beta_opt = 0.006;
    cfg.alpha = 1.0;
    cfg.aug = AugPolicy::cnn_profile();
  } else if (name == "retina_transformer") {
    cfg.curriculum.beta_opt = 0.006;
    cfg.alpha = 0.5;
    cfg.aug = AugPolicy::transformer_profile();
  } else if (name == "nuclei") {
    cfg.curriculum.beta_opt = 1.0;
    cfg.alpha = 0.7;
    cfg.aug = AugPolicy::cnn_profile();
  } else {
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  }
  return cfg;
}

DatasetManifest RunConfig::dataset() const {
  if (source_images.empty()) throw ValidationError("config: source_images is required");
  if (target_images.empty()) throw ValidationError("config: target_images is required");
  DatasetManifest manifest = DatasetManifest::from_directories(source_images, source_masks, target_images);
  manifest.height = height;
  manifest.width = width;
  return manifest;
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    entries.emplace_back(trim(std::string_view(line).substr(0, eq)),
                         trim(std::string_view(line).substr(eq + 1)));
  }

  RunConfig cfg;
  for (const auto& [key, value] : entries) {
    if (key == "preset") cfg = RunConfig::preset(value);
  }
  for (const auto& [key, value] : entries) {
    if (key == "preset") {
      continue;
    } else if (key == "seed") {
      cfg.seed = parse_uint(key, value);
    } else if (key == "alpha") {
      cfg.alpha = parse_double(key, value);
    } else if (key == "beta_opt") {
      cfg.curriculum.beta_opt = parse_double(key, value);
    } else if (key == "epoch_ratio") {
      cfg.curriculum.epoch_ratio = parse_double(key, value);
    } else if (key == "epochs") {
      const auto e = parse_uint(key, value);
      if (e > UINT32_MAX) throw ValidationError("config: epochs out of range");
      cfg.curriculum.total_epochs = static_cast<std::uint32_t>(e);
    } else if (key == "scheduler") {
      const auto kind = parse_scheduler_kind(value);
      if (!kind) throw ValidationError("config: unknown scheduler '" + value + "'");
      cfg.curriculum.kind = *kind;
    } else if (key == "exp_curvature") {
      cfg.curriculum.exp_curvature = parse_double(key, value);
    } else if (key == "augment") {
      cfg.augment = parse_bool(key, value);
    } else if (key == "aug.level") {
      cfg.aug.magnitude_level = static_cast<int>(parse_uint(key, value));
    } else if (key == "aug.chains") {
      cfg.aug.num_chains = parse_uint(key, value);
    } else if (key == "aug.max_ops") {
      cfg.aug.max_ops_per_chain = parse_uint(key, value);
    } else if (key == "aug.beta_a") {
      cfg.aug.beta_a = parse_double(key, value);
    } else if (key == "aug.beta_b") {
      cfg.aug.beta_b = parse_double(key, value);
    } else if (key == "aug.dirichlet") {
      cfg.aug.dirichlet_param = parse_double(key, value);
    } else if (key == "aug.ops") {
      cfg.aug.op_set.clear();
      for (const auto& name : split_list(value)) {
        const auto op = parse_aug_op(name);
        if (!op) throw ValidationError("config: unknown augmentation op '" + name + "'");
        cfg.aug.op_set.push_back(*op);
      }
    } else if (key == "source_images") {
      cfg.source_images = resolve(base_dir, value);
    } else if (key == "source_masks") {
      cfg.source_masks = resolve(base_dir, value);
    } else if (key == "target_images") {
      cfg.target_images = resolve(base_dir, value);
    } else if (key == "output_root") {
      cfg.output_root = resolve(base_dir, value);
    } else if (key == "height") {
      cfg.height = parse_uint(key, value);
    } else if (key == "width") {
      cfg.width = parse_uint(key, value);
    } else if (key == "pairing") {
      if (value != "uniform_random") throw ValidationError("config: unknown pairing '" + value + "'");
      cfg.pairing = Pairing::kUniformRandom;
    } else {
      throw ValidationError("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str(), path.parent_path());
}

std::string to_config_text(const RunConfig& cfg) {
  std::string out;
  auto put = [&](const std::string& key, const std::string& value) { out += key + " = " + value + "\n"; };
  put("seed", std::to_string(cfg.seed));
  put("alpha", format_double(cfg.alpha));
  put("beta_opt", format_double(cfg.curriculum.beta_opt));
  put("epoch_ratio", format_double(cfg.curriculum.epoch_ratio));
  put("epochs", std::to_string(cfg.curriculum.total_epochs));
  put("scheduler", std::string(to_string(cfg.curriculum.kind)));
  put("exp_curvature", format_double(cfg.curriculum.exp_curvature));
  put("augment", cfg.augment ? "true" : "false");
  put("aug.level", std::to_string(cfg.aug.magnitude_level));
  put("aug.chains", std::to_string(cfg.aug.num_chains));
  put("aug.max_ops", std::to_string(cfg.aug.max_ops_per_chain));
  put("aug.beta_a", format_double(cfg.aug.beta_a));
  put("aug.beta_b", format_double(cfg.aug.beta_b));
  put("aug.dirichlet", format_double(cfg.aug.dirichlet_param));
  std::string ops;
  for (AugOp op : cfg.aug.op_set) ops += (ops.empty() ? "" : ",") + std::string(to_string(op));
  put("aug.ops", ops);
  put("pairing", "uniform_random");
  if (!cfg.source_images.empty()) put("source_images", cfg.source_images.generic_string());
  if (cfg.source_masks) put("source_masks", cfg.source_masks->generic_string());
  if (!cfg.target_images.empty()) put("target_images", cfg.target_images.generic_string());
  put("output_root", cfg.output_root.generic_string());
  if (cfg.height) put("height", std::to_string(*cfg.height));
  if (cfg.width) put("width", std::to_string(*cfg.width));
  return out;
}

EpochState epoch_state(const RunConfig& cfg, std::uint32_t epoch) {
  Rng rng = schedule_rng(cfg.seed, epoch);
  return {epoch, schedule_beta(cfg.curriculum, epoch, rng)};
}

std::uint64_t sample_seed(std::uint64_t seed, std::uint32_t epoch, std::uint64_t sample_index) noexcept {
  return derive_seed(seed, {kSampleStream, epoch, sample_index});
}

SampleResult curri_afda_sample(const Image& src, const std::optional<Mask>& mask, const Image& tgt,
                               const RunConfig& cfg, const EpochState& st, Rng& rng) {
  try {
    if (mask && (mask->height() != src.height() || mask->width() != src.width())) {
      throw ValidationError("mask does not match the source image size");
    }
    SampleResult out;
    out.beta_c = st.beta_c;
    Image fused = fda_transform(src, tgt, FusionParams{cfg.alpha, st.beta_c});
    if (!cfg.augment) {
      out.image = std::move(fused);
      out.mask = mask;
      return out;
    }
    AugmixResult mixed = chained_augmix(fused, mask, cfg.aug, rng, cfg.injected_mix);
    out.image = std::move(mixed.image);
    out.mask = std::move(mixed.mask);
    out.plan = std::move(mixed.plan);
    return out;
  } catch (const ValidationError& e) {
    throw ValidationError("sample (epoch " + std::to_string(st.epoch) + "): " + e.what());
  }
}

SampleTransform::SampleTransform(RunConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  states_.reserve(cfg_.curriculum.total_epochs);
  for (std::uint32_t e = 0; e < cfg_.curriculum.total_epochs; ++e) states_.push_back(epoch_state(cfg_, e));
}

SampleResult SampleTransform::operator()(std::uint32_t epoch, std::uint64_t sample_index, const Image& src,
                                         const std::optional<Mask>& mask, const Image& tgt) const {
  if (epoch >= states_.size()) {
    throw ValidationError("epoch " + std::to_string(epoch) + " is outside [0, " +
                          std::to_string(states_.size()) + ")");
  }
  Rng rng(sample_seed(cfg_.seed, epoch, sample_index));
  return curri_afda_sample(src, mask, tgt, cfg_, states_[epoch], rng);
}

InterleavedSample SampleTransform::apply_interleaved(std::uint32_t epoch, std::uint64_t sample_index,
                                                     std::span<const double> src, std::size_t height,
                                                     std::size_t width, std::size_t channels,
                                                     std::span<const std::uint8_t> mask,
                                                     std::span<const double> tgt, std::size_t tgt_height,
                                                     std::size_t tgt_width) const {
  const Image src_img = from_interleaved(src, height, width, channels);
  const Image tgt_img = from_interleaved(tgt, tgt_height, tgt_width, channels);
  std::optional<Mask> mask_grid;
  if (!mask.empty()) {
    if (mask.size() != height * width) {
      throw ValidationError("mask buffer length " + std::to_string(mask.size()) + " != " +
                            std::to_string(height * width));
    }
    mask_grid = Mask(height, width, std::vector<std::uint8_t>(mask.begin(), mask.end()));
  }
  SampleResult r = (*this)(epoch, sample_index, src_img, mask_grid, tgt_img);
  InterleavedSample out;
  out.height = r.image.height();
  out.width = r.image.width();
  out.channels = r.image.channels();
  out.image = to_interleaved(r.image);
  if (r.mask) out.mask.assign(r.mask->values().begin(), r.mask->values().end());
  out.beta_c = r.beta_c;
  return out;
}

std::vector<std::size_t> pair_targets(std::uint64_t seed, std::uint32_t epoch, std::size_t sources,
                                      std::size_t targets) {
  if (targets == 0) throw ValidationError("pairing: no target records");
  Rng rng(derive_seed(seed, {kPairingStream, epoch}));
  std::vector<std::size_t> out(sources);
  for (auto& t : out) t = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(targets) - 1));
  return out;
}

Image load_image(const DatasetManifest& manifest, const std::filesystem::path& path) {
  Image img = io::read_png(path);
  if (manifest.height && manifest.width && (img.height() != *manifest.height || img.width() != *manifest.width)) {
    img = imgproc::resize_bilinear(img, *manifest.height, *manifest.width);
  }
  return img;
}

Mask load_mask(const DatasetManifest& manifest, const std::filesystem::path& path) {
  Mask m = io::read_mask_png(path);
  if (manifest.height && manifest.width && (m.height() != *manifest.height || m.width() != *manifest.width)) {
    m = imgproc::resize_nearest(m, *manifest.height, *manifest.width);
  }
  return m;
}

std::string epoch_record_json(const EpochRecord& r) {
  nlohmann::ordered_json row;
  row["index"] = r.index;
  row["src"] = r.src;
  row["tgt"] = r.tgt;
  row["beta_c"] = r.beta_c;
  row["seed"] = r.seed;
  if (r.error.empty()) {
    row["image"] = r.image;
    row["mask"] = r.mask.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.mask);
    if (r.plan) {
      row["m"] = r.plan->coefficients.m;
      row["w"] = r.plan->coefficients.w;
      nlohmann::ordered_json ops;
      ops["shared"] = r.plan->geometric ? op_json(*r.plan->geometric)
                                        : nlohmann::ordered_json(nullptr);
      ops["chains"] = nlohmann::ordered_json::array();
      for (const auto& chain : r.plan->chains) {
        nlohmann::ordered_json c = nlohmann::ordered_json::array();
        for (const auto& p : chain) c.push_back(op_json(p));
        ops["chains"].push_back(c);
      }
      row["ops"] = ops;
    } else {
      row["m"] = 1.0;
      row["w"] = nlohmann::ordered_json::array();
      row["ops"] = nullptr;
    }
  } else {
    row["error"] = r.error;
  }
  return row.dump();
}

std::vector<EpochRecord> generate_epoch(const DatasetManifest& manifest, const RunConfig& cfg,
                                        std::uint32_t epoch, const EpochOptions& options) {
  manifest.validate();
  const SampleTransform transform(cfg);
  const auto sources = manifest.sources();
  const auto targets = manifest.targets();
  const auto pairs = pair_targets(cfg.seed, epoch, sources.size(), targets.size());
  const std::filesystem::path epoch_dir = cfg.output_root / ("epoch_" + std::to_string(epoch));
  const double beta_c = epoch_state(cfg, epoch).beta_c;

  std::vector<EpochRecord> records(sources.size());
  parallel_for(sources.size(), options.workers, [&](std::size_t i) {
    EpochRecord& rec = records[i];
    const DatasetRecord& src = *sources[i];
    const DatasetRecord& tgt = *targets[pairs[i]];
    rec.index = i;
    rec.src = src.image.filename().string();
    rec.tgt = tgt.image.filename().string();
    rec.seed = sample_seed(cfg.seed, epoch, i);
    rec.beta_c = beta_c;
    try {
      std::optional<Mask> mask;
      if (src.mask) mask = load_mask(manifest, *src.mask);
      SampleResult result;
      {
        const Image src_img = load_image(manifest, src.image);
        const Image tgt_img = load_image(manifest, tgt.image);
        result = transform(epoch, i, src_img, mask, tgt_img);
      }
      if (options.on_sample) options.on_sample(i, result);
      const std::string name = src.image.stem().string() + ".png";
      rec.image = "images/" + name;
      io::write_png(epoch_dir / rec.image, result.image);
      if (result.mask) {
        rec.mask = "masks/" + name;
        io::write_mask_png(epoch_dir / rec.mask, *result.mask);
      }
      rec.plan = std::move(result.plan);
    } catch (const std::exception& e) {
      rec.image.clear();
      rec.mask.clear();
      rec.error = e.what();
    }
  });

  std::string lines;
  for (const auto& rec : records) lines += epoch_record_json(rec) + "\n";
  io::write_text_file(epoch_dir / "manifest.jsonl", lines);
  return records;
}

void run_all(const DatasetManifest& manifest, const RunConfig& cfg, const EpochOptions& options) {
  cfg.validate();
  RunConfig recorded = cfg;
  recorded.source_images.clear();
  recorded.source_masks.reset();
  recorded.target_images.clear();
  recorded.output_root = ".";
  io::write_text_file(cfg.output_root / "config.cfg", to_config_text(recorded));
  io::write_text_file(cfg.output_root / "schedule.csv", schedule_csv(schedule_table(cfg.curriculum, cfg.seed)));
  for (std::uint32_t e = 0; e < cfg.curriculum.total_epochs; ++e) generate_epoch(manifest, cfg, e, options);
}

}  // namespace cafda
