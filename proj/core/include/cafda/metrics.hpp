#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cafda/grid.hpp"

namespace cafda {

/// 2|P n G| / (|P| + |G|) over pixels labelled class_id; 1.0 when both are empty.
double dice(const Mask& pred, const Mask& gt, std::uint8_t class_id);

/// Mean and population standard deviation (divisor n). Empty input gives (0, 0).
struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};
MeanStd mean_std(const std::vector<double>& values);

struct DiceRow {
  std::string name;
  std::string status;         ///< "ok", "missing_pred" or "missing_gt"
  std::vector<double> scores; ///< one per class, empty unless status is "ok"
  double mean = 0.0;          ///< mean over classes
};

struct DiceReport {
  std::vector<std::uint8_t> classes;
  std::vector<DiceRow> rows;        ///< sorted by name
  std::vector<MeanStd> per_class;   ///< over "ok" rows
  MeanStd overall;                  ///< over the per-row class means

  /// file,status,class_<c>...,mean rows, then "mean" and "std" summary rows.
  std::string to_csv() const;
};

/// Pairs PNG masks by file name. A name present on only one side is
/// recorded with a missing status and left out of the statistics.
DiceReport evaluate_masks(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                          const std::vector<std::uint8_t>& classes);

}  // namespace cafda
