#include "cafda/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>

#include "cafda/io.hpp"

namespace cafda {

double dice(const Mask& pred, const Mask& gt, std::uint8_t class_id) {
  require_same_shape(pred, gt, "dice");
  std::size_t p = 0, g = 0, both = 0;
  auto pv = pred.values();
  auto gv = gt.values();
  for (std::size_t i = 0; i < pv.size(); ++i) {
    const bool in_p = pv[i] == class_id;
    const bool in_g = gv[i] == class_id;
    p += in_p;
    g += in_g;
    both += in_p && in_g;
  }
  if (p + g == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(p + g);
}

MeanStd mean_std(const std::vector<double>& values) {
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string DiceReport::to_csv() const {
  std::string out = "file,status";
  for (auto c : classes) out += ",class_" + std::to_string(c);
  out += ",mean\n";
  for (const auto& row : rows) {
    out += row.name + "," + row.status;
    for (std::size_t i = 0; i < classes.size(); ++i) {
      out += ",";
      if (row.status == "ok") out += format_number(row.scores[i]);
    }
    out += ",";
    if (row.status == "ok") out += format_number(row.mean);
    out += "\n";
  }
  out += "mean,summary";
  for (const auto& s : per_class) out += "," + format_number(s.mean);
  out += "," + format_number(overall.mean) + "\n";
  out += "std,summary";
  for (const auto& s : per_class) out += "," + format_number(s.stddev);
  out += "," + format_number(overall.stddev) + "\n";
  return out;
}

DiceReport evaluate_masks(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                          const std::vector<std::uint8_t>& classes) {
  if (classes.empty()) throw ValidationError("evaluate_masks: at least one class is required");
  std::map<std::string, std::pair<std::filesystem::path, std::filesystem::path>> by_name;
  for (const auto& p : io::list_png_files(pred_dir)) by_name[p.filename().string()].first = p;
  for (const auto& g : io::list_png_files(gt_dir)) by_name[g.filename().string()].second = g;

  DiceReport report;
  report.classes = classes;
  std::vector<std::vector<double>> columns(classes.size());
  std::vector<double> means;
  for (const auto& [name, paths] : by_name) {
    DiceRow row;
    row.name = name;
    if (paths.first.empty()) {
      row.status = "missing_pred";
    } else if (paths.second.empty()) {
      row.status = "missing_gt";
    } else {
      row.status = "ok";
      const Mask pred = io::read_mask_png(paths.first);
      const Mask gt = io::read_mask_png(paths.second);
      double sum = 0.0;
      for (std::size_t i = 0; i < classes.size(); ++i) {
        const double d = dice(pred, gt, classes[i]);
        row.scores.push_back(d);
        columns[i].push_back(d);
        sum += d;
      }
      row.mean = sum / static_cast<double>(classes.size());
      means.push_back(row.mean);
    }
    report.rows.push_back(std::move(row));
  }
  for (const auto& col : columns) report.per_class.push_back(mean_std(col));
  report.overall = mean_std(means);
  return report;
}

}  // namespace cafda
